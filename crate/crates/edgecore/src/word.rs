//! Fixed-width bit vectors, the unit of all gate-level arithmetic.
//!
//! A [`BitWord`] stores up to 32 bits behind a declared width; every
//! operation on words is modular at that width. Signedness is a reading
//! convention, not a storage difference: the same bits can be read back as
//! an unsigned value or as two's complement.

use std::fmt;

/// Interpretation applied when a word is read back as an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Signedness {
    #[default]
    Unsigned,
    TwosComplement,
}

/// Bit vector of declared width (1..=32), bit 0 least significant.
#[derive(Clone, Copy)]
pub struct BitWord {
    bits: u32,
    width: u8,
    signedness: Signedness,
}

impl BitWord {
    pub const MAX_WIDTH: u8 = 32;

    fn mask(width: u8) -> u32 {
        debug_assert!((1..=Self::MAX_WIDTH).contains(&width));
        (((1u64) << width) - 1) as u32
    }

    /// All-zero word of the given width.
    pub fn zero(width: u8) -> Self {
        Self::unsigned(0, width)
    }

    /// Builds a word from an unsigned value, wrapping modulo 2^width.
    pub fn unsigned(value: u32, width: u8) -> Self {
        assert!(
            (1..=Self::MAX_WIDTH).contains(&width),
            "word width {width} outside 1..=32"
        );
        BitWord {
            bits: value & Self::mask(width),
            width,
            signedness: Signedness::Unsigned,
        }
    }

    /// Builds a two's-complement word, wrapping modulo 2^width.
    pub fn signed(value: i32, width: u8) -> Self {
        Self::unsigned(value as u32, width).as_signed()
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn signedness(&self) -> Signedness {
        self.signedness
    }

    /// The stored bits; everything at index >= width is zero.
    pub fn raw(&self) -> u32 {
        self.bits
    }

    pub fn bit(&self, index: u8) -> bool {
        assert!(index < self.width, "bit {index} outside width {}", self.width);
        (self.bits >> index) & 1 == 1
    }

    pub fn as_signed(mut self) -> Self {
        self.signedness = Signedness::TwosComplement;
        self
    }

    pub fn as_unsigned(mut self) -> Self {
        self.signedness = Signedness::Unsigned;
        self
    }

    pub fn value_unsigned(&self) -> u32 {
        self.bits
    }

    /// Sign-extends the top bit of the declared width.
    pub fn value_signed(&self) -> i32 {
        let shift = 32 - self.width;
        ((self.bits << shift) as i32) >> shift
    }

    /// Integer value under this word's declared signedness.
    pub fn value(&self) -> i64 {
        match self.signedness {
            Signedness::Unsigned => i64::from(self.value_unsigned()),
            Signedness::TwosComplement => i64::from(self.value_signed()),
        }
    }

    /// Shift left by one bit, dropping the top bit (multiply by two mod 2^w).
    pub fn shl1(self) -> Self {
        BitWord {
            bits: (self.bits << 1) & Self::mask(self.width),
            ..self
        }
    }

    /// Two's-complement negation modulo 2^width.
    pub fn negated(self) -> Self {
        BitWord {
            bits: self.bits.wrapping_neg() & Self::mask(self.width),
            ..self
        }
    }

    pub fn zero_extend(self, width: u8) -> Self {
        assert!(width >= self.width, "cannot zero-extend {} down to {width}", self.width);
        BitWord::unsigned(self.bits, width)
    }

    pub fn sign_extend(self, width: u8) -> Self {
        assert!(width >= self.width, "cannot sign-extend {} down to {width}", self.width);
        BitWord::signed(self.value_signed(), width)
    }
}

// Bitwise complement within the declared width.
impl std::ops::Not for BitWord {
    type Output = BitWord;

    fn not(self) -> BitWord {
        BitWord {
            bits: !self.bits & Self::mask(self.width),
            ..self
        }
    }
}

// Equality is on storage and width only; signedness is a reading convention.
impl PartialEq for BitWord {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.bits == other.bits
    }
}

impl Eq for BitWord {}

impl std::hash::Hash for BitWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.width.hash(state);
        self.bits.hash(state);
    }
}

// Words print MSB-first with a 0b prefix, padded to the declared width.
impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0b{:0width$b}", self.bits, width = self.width as usize)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord<{}>({})", self.width, self)
    }
}

/// Carry-save pair produced by a compressor layer. Carry bits are already
/// placed at their weighted positions, so `sum + carry` modulo 2^width is the
/// layer's arithmetic result and one final addition collapses the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsPair {
    pub sum: BitWord,
    pub carry: BitWord,
}

impl CsPair {
    pub fn new(sum: BitWord, carry: BitWord) -> Self {
        assert_eq!(sum.width(), carry.width(), "carry-save pair width mismatch");
        CsPair { sum, carry }
    }

    pub fn width(&self) -> u8 {
        self.sum.width()
    }

    /// `sum + carry` reduced modulo 2^width.
    pub fn total_raw(&self) -> u32 {
        self.sum
            .raw()
            .wrapping_add(self.carry.raw())
            & BitWord::mask(self.width())
    }
}

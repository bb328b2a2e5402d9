//! The two custom 3:2 compressors and their 4:2 composition.
//!
//! A 3:2 compressor reduces three addend bits per column to a sum bit and a
//! carry bit one column up, with no carry propagation along the word. The two
//! cells here fold extra work into the compression itself:
//!
//! * [`p2pp_compress`] doubles its middle operand by feeding it in offset one
//!   bit position, so one layer reduces `x + 2y + z`. The least significant
//!   bit of the shifted operand is zero, and the carry word's bit 0 is always
//!   clear.
//! * [`ppn_compress`] subtracts its third operand by inverting it bitwise and
//!   forcing the least significant carry bit to 1 — the `+1` of
//!   two's-complement negation — so one layer reduces `x + y - z`. The carry
//!   word's bit 0 is always set.
//!
//! Stacking the two gives [`compress_4_2`], which reduces `a + 2b + c - d` to
//! a single carry-save pair; one ordinary addition then collapses it.

use crate::word::{BitWord, CsPair};

fn majority(a: u32, b: u32, c: u32) -> u32 {
    (a & b) | (a & c) | (b & c)
}

fn common_width(ws: &[&BitWord]) -> u8 {
    let w = ws[0].width();
    for x in ws {
        assert_eq!(x.width(), w, "compressor operand width mismatch");
    }
    w
}

/// First-layer compressor: reduces `x + 2y + z` (mod 2^w) to a carry-save
/// pair. Per bit i, `sum_i = x_i ^ y_(i-1) ^ z_i` and
/// `carry_(i+1) = majority(x_i, y_(i-1), z_i)`, with `y_(-1) = 0` and
/// `carry_0 = 0`.
///
/// Panics on operand width mismatch.
pub fn p2pp_compress(x: BitWord, y: BitWord, z: BitWord) -> CsPair {
    let w = common_width(&[&x, &y, &z]);
    let ys = y.shl1().raw();
    let sum = BitWord::unsigned(x.raw() ^ ys ^ z.raw(), w);
    let carry = BitWord::unsigned(majority(x.raw(), ys, z.raw()) << 1, w);
    CsPair::new(sum, carry)
}

/// Second-layer compressor: reduces `x + y - z` (mod 2^w) to a carry-save
/// pair. Per bit i, `sum_i = !(x_i ^ y_i ^ z_i)` and
/// `carry_(i+1) = majority(x_i, y_i, !z_i)`, with `carry_0` forced to 1.
///
/// Panics on operand width mismatch.
pub fn ppn_compress(x: BitWord, y: BitWord, z: BitWord) -> CsPair {
    let w = common_width(&[&x, &y, &z]);
    let zn = (!z).raw();
    let sum = BitWord::unsigned(x.raw() ^ y.raw() ^ zn, w);
    let carry = BitWord::unsigned((majority(x.raw(), y.raw(), zn) << 1) | 1, w);
    CsPair::new(sum, carry)
}

/// Two-level 4:2 compressor: the first layer performs the doubling, the
/// second the subtraction. Reduces `a + 2b + c - d` (mod 2^w) to one
/// carry-save pair.
///
/// Panics on operand width mismatch.
pub fn compress_4_2(a: BitWord, b: BitWord, c: BitWord, d: BitWord) -> CsPair {
    common_width(&[&a, &b, &c, &d]);
    let interim = p2pp_compress(a, b, c);
    ppn_compress(interim.sum, interim.carry, d)
}

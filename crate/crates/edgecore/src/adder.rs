//! Ripple-carry addition and the split look-ahead adder.
//!
//! The look-ahead adder breaks the carry chain at the midpoint: the two half
//! words ripple in parallel, and the upper half's carry-in comes from a
//! generate/propagate prediction over the top two bits of the lower half
//! instead of waiting for the lower chain's carry-out.

use crate::word::BitWord;

fn check_widths(a: &BitWord, b: &BitWord) -> u8 {
    assert_eq!(a.width(), b.width(), "adder operand width mismatch");
    a.width()
}

fn maj(a: bool, b: bool, c: bool) -> bool {
    (a && b) || (a && c) || (b && c)
}

/// Full-adder chain: returns `a + b + carry_in` modulo 2^w and the carry out
/// of bit w-1.
///
/// Panics on operand width mismatch.
pub fn ripple_add(a: BitWord, b: BitWord, carry_in: bool) -> (BitWord, bool) {
    let w = check_widths(&a, &b);
    let mut carry = carry_in;
    let mut bits = 0u32;
    for i in 0..w {
        let (ai, bi) = (a.bit(i), b.bit(i));
        bits |= u32::from(ai ^ bi ^ carry) << i;
        carry = maj(ai, bi, carry);
    }
    (BitWord::unsigned(bits, w), carry)
}

/// Split adder with midpoint carry prediction. Bit-identical to
/// [`ripple_add`] for every input; widths below 4 fall back to it directly.
///
/// The split is at `m = ceil(w/2)`. The carry into bit m is predicted as
/// `G + P*C`, where G and P are the generate/propagate terms of the two-bit
/// group at bits m-1 and m-2, and C is the ripple carry entering bit m-2.
///
/// Panics on operand width mismatch.
pub fn lookahead_add(a: BitWord, b: BitWord, carry_in: bool) -> (BitWord, bool) {
    let w = check_widths(&a, &b);
    if w < 4 {
        return ripple_add(a, b, carry_in);
    }
    let m = w.div_ceil(2);

    // Lower half, recording the carry that enters bit m-2.
    let mut carry = carry_in;
    let mut carry_into_group = carry_in;
    let mut bits = 0u32;
    for i in 0..m {
        if i == m - 2 {
            carry_into_group = carry;
        }
        let (ai, bi) = (a.bit(i), b.bit(i));
        bits |= u32::from(ai ^ bi ^ carry) << i;
        carry = maj(ai, bi, carry);
    }

    let (a1, b1) = (a.bit(m - 1), b.bit(m - 1));
    let (a2, b2) = (a.bit(m - 2), b.bit(m - 2));
    let generate = (a1 && b1) || ((a1 ^ b1) && (a2 && b2));
    let propagate = (a1 ^ b1) && (a2 ^ b2);
    let midpoint_carry = generate || (propagate && carry_into_group);

    // Upper half ripples from the predicted carry.
    let mut carry = midpoint_carry;
    for i in m..w {
        let (ai, bi) = (a.bit(i), b.bit(i));
        bits |= u32::from(ai ^ bi ^ carry) << i;
        carry = maj(ai, bi, carry);
    }
    (BitWord::unsigned(bits, w), carry)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w8(v: u32) -> BitWord {
        BitWord::unsigned(v, 8)
    }

    #[test]
    fn ripple_basics() {
        assert_eq!(ripple_add(w8(0), w8(0), false), (w8(0), false));
        // Full carry propagation through all eight bits.
        assert_eq!(ripple_add(w8(255), w8(1), false), (w8(0), true));
        // Complement pair plus one.
        assert_eq!(ripple_add(w8(0x5A), w8(0xA5), true), (w8(0), true));
    }

    #[test]
    fn lookahead_carry_crosses_midpoint() {
        assert_eq!(
            lookahead_add(w8(0b0111_1111), w8(0b0000_0001), false),
            (w8(0b1000_0000), false)
        );
        assert_eq!(lookahead_add(w8(0), w8(0), false), (w8(0), false));
    }

    #[test]
    fn lookahead_matches_ripple_exhaustively_w8() {
        for a in 0..256u32 {
            for b in 0..256u32 {
                for cin in [false, true] {
                    assert_eq!(
                        lookahead_add(w8(a), w8(b), cin),
                        ripple_add(w8(a), w8(b), cin),
                        "a={a} b={b} cin={cin}"
                    );
                }
            }
        }
    }

    #[test]
    fn lookahead_matches_ripple_random_wide() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for width in 11..=16u8 {
            let m = (1u64 << width) as u32;
            for _ in 0..20_000 {
                let a = BitWord::unsigned(rng.gen_range(0..m), width);
                let b = BitWord::unsigned(rng.gen_range(0..m), width);
                let cin = rng.gen_bool(0.5);
                assert_eq!(lookahead_add(a, b, cin), ripple_add(a, b, cin));
            }
        }
    }

    #[test]
    fn narrow_widths_fall_back_to_ripple() {
        for width in 1..=3u8 {
            let m = 1u32 << width;
            for a in 0..m {
                for b in 0..m {
                    for cin in [false, true] {
                        let aa = BitWord::unsigned(a, width);
                        let bb = BitWord::unsigned(b, width);
                        assert_eq!(lookahead_add(aa, bb, cin), ripple_add(aa, bb, cin));
                    }
                }
            }
        }
    }

    #[test]
    fn ripple_value_contract_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let width = rng.gen_range(1..=32u8);
            let m = 1u64 << width;
            let a = (rng.gen::<u64>() % m) as u32;
            let b = (rng.gen::<u64>() % m) as u32;
            let cin = rng.gen_bool(0.5);
            let (sum, cout) = ripple_add(
                BitWord::unsigned(a, width),
                BitWord::unsigned(b, width),
                cin,
            );
            let true_sum = u64::from(a) + u64::from(b) + u64::from(cin);
            assert_eq!(u64::from(sum.raw()), true_sum % m);
            assert_eq!(cout, true_sum >= m);
        }
    }

    #[test]
    #[should_panic(expected = "width mismatch")]
    fn width_mismatch_is_a_contract_violation() {
        ripple_add(BitWord::zero(8), BitWord::zero(9), false);
    }
}

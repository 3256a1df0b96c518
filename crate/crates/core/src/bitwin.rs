//! Windowed bitmask engine for set arithmetic over bounded universes.
//!
//! Sets over {0,...,w-1} are stored one bit per element. A sumset is then a
//! union of shifted copies of B, one per element of A: linear shifts in the Z
//! window, cyclic rotations mod p. This is what makes exhaustive sweeps over
//! tens of millions of pairs feasible.
//!
//! The engine is deliberately a separate code path from the double loops in
//! [`crate::sumset`]; the two routes are compared on random inputs by the
//! test suite.

use crate::set::{IntSet, ModSet};

/// Widest Z window: elements in [0, 64), sums in [0, 127).
pub const MAX_INT_WINDOW: u32 = 64;

/// Largest modulus whose residue masks fit in a u128.
pub const MAX_MOD_BITS: u32 = 127;

/// A+B for Z-window masks. Bit `i` of the inputs means element `i`; bit `s`
/// of the output means sum `s`.
pub fn sumset_bits(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        acc |= (b as u128) << i;
    }
    acc
}

/// A+^B for Z-window masks: for each a in A the copy of B is shifted with
/// the bit for b = a cleared.
pub fn restricted_sumset_bits(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        let m = b & !(1u64 << i);
        acc |= (m as u128) << i;
    }
    acc
}

/// All-ones mask over the low `p` bits.
pub fn low_mask(p: u32) -> u128 {
    debug_assert!((1..=MAX_MOD_BITS).contains(&p));
    (1u128 << p) - 1
}

/// Cyclic left rotation of a p-bit mask by `k` in [0, p).
#[inline]
pub fn rotl_mod(m: u128, k: u32, p: u32) -> u128 {
    ((m << k) | (m >> (p - k))) & low_mask(p)
}

/// A+B for mod-p masks (low p bits used, p <= 127).
pub fn sumset_bits_mod(a: u128, b: u128, p: u32) -> u128 {
    let mut acc = 0u128;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        acc |= rotl_mod(b, i, p);
    }
    acc
}

/// A+^B for mod-p masks.
pub fn restricted_sumset_bits_mod(a: u128, b: u128, p: u32) -> u128 {
    let mut acc = 0u128;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        let m = b & !(1u128 << i);
        acc |= rotl_mod(m, i, p);
    }
    acc
}

/// Mask for an integer set, if every element fits the Z window.
pub fn int_mask(set: &IntSet) -> Option<u64> {
    let mut m = 0u64;
    for &e in set.elements() {
        if !(0..MAX_INT_WINDOW as i64).contains(&e) {
            return None;
        }
        m |= 1u64 << e;
    }
    Some(m)
}

/// Mask for a residue set, if the modulus fits 127 bits.
pub fn mod_mask(set: &ModSet) -> Option<u128> {
    if set.modulus() > MAX_MOD_BITS as u64 {
        return None;
    }
    let mut m = 0u128;
    for &e in set.elements() {
        m |= 1u128 << e;
    }
    Some(m)
}

/// Decode a bit mask back into the integer set of its set-bit positions.
pub fn intset_from_bits(mut bits: u128) -> IntSet {
    let mut elems = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        elems.push(bits.trailing_zeros() as i64);
        bits &= bits - 1;
    }
    IntSet::new(elems).expect("bit positions are strictly increasing")
}

/// Decode a bit mask back into a residue set mod `p`.
pub fn modset_from_bits(mut bits: u128, p: u64) -> ModSet {
    let mut elems = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        elems.push(bits.trailing_zeros() as u64);
        bits &= bits - 1;
    }
    ModSet::new(p, elems).expect("bit positions below p are valid residues")
}

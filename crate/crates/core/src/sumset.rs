//! Sumsets, restricted sumsets, and the classical lower bounds.
//!
//! These are the ground-truth operations the rest of the crate trusts: plain
//! double loops over the element lists, with overflow-checked arithmetic in
//! the Z context. The windowed bitmask engine in [`crate::bitwin`] is an
//! independently coded fast route used by the sweep machinery; the two are
//! cross-checked by tests.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::set::{GroupContext, IntSet, ModSet};

/// A+B over Z.
pub fn sumset(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(x.checked_add(y).ok_or(Error::Overflow)?);
        }
    }
    IntSet::new(out.into_iter().collect())
}

/// A+^B over Z: sums x+y with x in A, y in B and x != y.
///
/// Tolerates singletons; `{x} +^ {x}` is empty.
pub fn restricted_sumset(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            if x != y {
                out.insert(x.checked_add(y).ok_or(Error::Overflow)?);
            }
        }
    }
    IntSet::new(out.into_iter().collect())
}

/// A+B over Z/pZ.
pub fn sumset_mod(a: &ModSet, b: &ModSet) -> Result<ModSet> {
    let p = same_modulus(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            out.insert(crate::set::add_mod(x, y, p));
        }
    }
    ModSet::new(p, out.into_iter().collect())
}

/// A+^B over Z/pZ. The disequality x != y is evaluated on canonical
/// representatives in [0, p-1], which coincides with residue inequality.
pub fn restricted_sumset_mod(a: &ModSet, b: &ModSet) -> Result<ModSet> {
    let p = same_modulus(a, b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = BTreeSet::new();
    for &x in a.elements() {
        for &y in b.elements() {
            if x != y {
                out.insert(crate::set::add_mod(x, y, p));
            }
        }
    }
    ModSet::new(p, out.into_iter().collect())
}

/// Cauchy-Davenport lower bound on |A+B|: `m+n-1` over Z, `min(p, m+n-1)`
/// over Z/pZ.
pub fn cd_lower_bound(m: u64, n: u64, ctx: GroupContext) -> u64 {
    let raw = m + n - 1;
    match ctx {
        GroupContext::Integers => raw,
        GroupContext::ModP(p) => raw.min(p),
    }
}

/// Erdos-Heilbronn lower bound on |A+^B|: `max(0, m+n-3)` over Z (the clamp
/// makes the bound total for singletons, whose restricted sumset can be
/// empty), `min(p, m+n-3)` over Z/pZ.
pub fn eh_lower_bound(m: u64, n: u64, ctx: GroupContext) -> u64 {
    let raw = (m + n).saturating_sub(3);
    match ctx {
        GroupContext::Integers => raw,
        GroupContext::ModP(p) => raw.min(p),
    }
}

/// True iff |A+^B| = |A|+|B|-3, the extremal case of the Erdos-Heilbronn
/// bound. Requires |A|, |B| >= 2; symmetric in A and B.
pub fn is_critical_pair(a: &IntSet, b: &IntSet) -> Result<bool> {
    require_pair_sizes(a.len(), b.len())?;
    let r = restricted_sumset(a, b)?;
    Ok(r.len() as u64 == (a.len() + b.len()) as u64 - 3)
}

/// Modular variant of [`is_critical_pair`].
pub fn is_critical_pair_mod(a: &ModSet, b: &ModSet) -> Result<bool> {
    require_pair_sizes(a.len(), b.len())?;
    let r = restricted_sumset_mod(a, b)?;
    Ok(r.len() as u64 == (a.len() + b.len()) as u64 - 3)
}

pub(crate) fn require_pair_sizes(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(Error::Precondition(format!(
            "both sets need at least 2 elements (got {m} and {n})"
        )));
    }
    Ok(())
}

pub(crate) fn same_modulus(a: &ModSet, b: &ModSet) -> Result<u64> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    Ok(a.modulus())
}

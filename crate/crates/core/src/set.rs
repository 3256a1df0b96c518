//! Domain set types: finite subsets of Z and of Z/pZ.
//!
//! Both types are immutable after construction, keep their elements strictly
//! increasing, and share one text format used by the CLI, reports and
//! checkpoints: `{e1,e2,...}`, with a `mod p: ` prefix for residue sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Largest accepted modulus. Residues below this bound always fit in `i64`,
/// so witness arithmetic never overflows.
pub const MAX_MODULUS: u64 = 1 << 62;

/// Which group an operation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupContext {
    Integers,
    ModP(u64),
}

impl GroupContext {
    /// Modular context with the primality of `p` checked up front.
    pub fn mod_p(p: u64) -> Result<Self> {
        check_modulus(p)?;
        Ok(GroupContext::ModP(p))
    }
}

impl fmt::Display for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupContext::Integers => write!(f, "integers"),
            GroupContext::ModP(p) => write!(f, "mod {p}"),
        }
    }
}

fn check_modulus(p: u64) -> Result<()> {
    if p > MAX_MODULUS {
        return Err(Error::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NonPrimeModulus(p));
    }
    Ok(())
}

/// Finite subset of Z, elements strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSet {
    elems: Vec<i64>,
}

impl IntSet {
    /// Build from an already strictly increasing sequence.
    pub fn new(elems: Vec<i64>) -> Result<Self> {
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Parse(if w[0] == w[1] {
                    format!("duplicate element {}", w[0])
                } else {
                    format!("elements must be strictly increasing: {} before {}", w[0], w[1])
                }));
            }
        }
        Ok(IntSet { elems })
    }

    /// Build from elements in any order; duplicates are rejected.
    pub fn from_unsorted(mut elems: Vec<i64>) -> Result<Self> {
        elems.sort_unstable();
        IntSet::new(elems)
    }

    pub fn elements(&self) -> &[i64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.elems.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.elems.last().copied()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &IntSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    /// Translate every element by `shift`, overflow-checked.
    pub fn translate(&self, shift: i64) -> Result<IntSet> {
        let elems = self
            .elems
            .iter()
            .map(|&x| x.checked_add(shift).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntSet { elems })
    }

    /// Multiply every element by `factor` (nonzero), overflow-checked.
    pub fn dilate(&self, factor: i64) -> Result<IntSet> {
        if factor == 0 {
            return Err(Error::Precondition("dilation factor must be nonzero".into()));
        }
        let mut elems = self
            .elems
            .iter()
            .map(|&x| x.checked_mul(factor).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        if factor < 0 {
            elems.reverse();
        }
        Ok(IntSet { elems })
    }

    /// Set with one element removed (no-op when absent).
    pub fn without(&self, x: i64) -> IntSet {
        IntSet {
            elems: self.elems.iter().copied().filter(|&e| e != x).collect(),
        }
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Subset of Z/pZ for a prime p, stored by canonical representatives in
/// [0, p-1], strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModSet {
    modulus: u64,
    elems: Vec<u64>,
}

impl ModSet {
    /// Build from an already strictly increasing sequence of residues.
    pub fn new(modulus: u64, elems: Vec<u64>) -> Result<Self> {
        check_modulus(modulus)?;
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Parse(if w[0] == w[1] {
                    format!("duplicate element {}", w[0])
                } else {
                    format!("elements must be strictly increasing: {} before {}", w[0], w[1])
                }));
            }
        }
        if let Some(&last) = elems.last() {
            if last >= modulus {
                return Err(Error::ResidueOutOfRange { value: last, modulus });
            }
        }
        Ok(ModSet { modulus, elems })
    }

    /// Build from residues in any order; duplicates are rejected.
    pub fn from_unsorted(modulus: u64, mut elems: Vec<u64>) -> Result<Self> {
        elems.sort_unstable();
        ModSet::new(modulus, elems)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Largest canonical representative.
    pub fn max(&self) -> Option<u64> {
        self.elems.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// Translate every residue by `shift` mod p.
    pub fn translate(&self, shift: u64) -> ModSet {
        let p = self.modulus;
        let elems = self.elems.iter().map(|&x| add_mod(x, shift % p, p)).collect();
        ModSet {
            modulus: p,
            elems: sorted(elems),
        }
    }

    /// Multiply every residue by `factor` in [1, p-1].
    pub fn dilate(&self, factor: u64) -> Result<ModSet> {
        let p = self.modulus;
        if factor == 0 || factor >= p {
            return Err(Error::Precondition(format!(
                "dilation factor must lie in [1, {}]",
                p - 1
            )));
        }
        let elems = self
            .elems
            .iter()
            .map(|&x| ((x as u128 * factor as u128) % p as u128) as u64)
            .collect();
        Ok(ModSet {
            modulus: p,
            elems: sorted(elems),
        })
    }
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

impl fmt::Display for ModSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {}: {{", self.modulus)?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A parsed set literal: either an integer set or a residue set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetLiteral {
    Int(IntSet),
    Mod(ModSet),
}

/// Parse the shared set literal grammar: `{e1,e2,...}` with strictly
/// increasing base-10 integers, optionally prefixed `mod p: `.
pub fn parse_set_literal(input: &str) -> Result<SetLiteral> {
    let s = input.trim();
    if let Some(rest) = s.strip_prefix("mod") {
        let rest = rest.trim_start();
        let colon = rest
            .find(':')
            .ok_or_else(|| Error::Parse(format!("expected `mod p: {{...}}` in {input:?}")))?;
        let p: u64 = rest[..colon]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid modulus in {input:?}")))?;
        let body = parse_braced(rest[colon + 1..].trim())?;
        let elems = body
            .iter()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("invalid residue {t:?} in {input:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        // Validate range before ordering so `mod 3: {0,3}` reports the
        // out-of-range residue, not a sortedness problem.
        for &e in &elems {
            if e >= p {
                return Err(Error::ResidueOutOfRange { value: e, modulus: p });
            }
        }
        Ok(SetLiteral::Mod(ModSet::new(p, elems)?))
    } else {
        let body = parse_braced(s)?;
        let elems = body
            .iter()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("invalid 64-bit integer {t:?} in {input:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetLiteral::Int(IntSet::new(elems)?))
    }
}

fn parse_braced(s: &str) -> Result<Vec<String>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected braced set literal, got {s:?}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|t| t.trim().to_string()).collect())
}

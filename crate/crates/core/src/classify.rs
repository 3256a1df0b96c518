//! Structural detectors (arithmetic progression, bi-pair) and the purely
//! structural criticality predictor.
//!
//! The predictor never evaluates a sumset: for pairs with |A|, |B| >= 2 it
//! decides criticality from shape alone. Over Z it answers for every pair;
//! over Z/pZ it requires p >= |A|+|B|-2 and refuses otherwise, since outside
//! that range the structural characterization does not apply.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gaps::mod_inverse;
use crate::set::{IntSet, ModSet};
use crate::sumset::{require_pair_sizes, same_modulus};

/// Witness that a set is an arithmetic progression {start + i*diff}.
///
/// Over Z the difference is the positive common difference. Mod p several
/// witnesses can describe one set (reading the progression backwards gives
/// p-d); the canonical witness is the one with the smallest difference in
/// [1, p-1], and among those the smallest start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApWitness {
    pub start: i64,
    pub diff: i64,
    pub len: u64,
}

impl ApWitness {
    /// Rebuild the witnessed set over Z.
    pub fn expand_int(&self) -> Result<IntSet> {
        let mut elems = Vec::with_capacity(self.len as usize);
        let mut x = self.start;
        for i in 0..self.len {
            elems.push(x);
            if i + 1 < self.len {
                x = x.checked_add(self.diff).ok_or(Error::Overflow)?;
            }
        }
        IntSet::from_unsorted(elems)
    }

    /// Rebuild the witnessed set mod p.
    pub fn expand_mod(&self, p: u64) -> Result<ModSet> {
        let start = u64::try_from(self.start).map_err(|_| Error::Overflow)?;
        let diff = u64::try_from(self.diff).map_err(|_| Error::Overflow)?;
        let mut elems = Vec::with_capacity(self.len as usize);
        let mut x = start % p;
        for _ in 0..self.len {
            elems.push(x);
            x = crate::set::add_mod(x, diff % p, p);
        }
        ModSet::from_unsorted(p, elems)
    }
}

/// Witness that a 4-element set has the form {a, a+d, c, c+d}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiPairWitness {
    pub a: i64,
    pub c: i64,
    pub d: i64,
}

impl BiPairWitness {
    pub fn expand_int(&self) -> Result<IntSet> {
        let ad = self.a.checked_add(self.d).ok_or(Error::Overflow)?;
        let cd = self.c.checked_add(self.d).ok_or(Error::Overflow)?;
        IntSet::from_unsorted(vec![self.a, ad, self.c, cd])
    }

    pub fn expand_mod(&self, p: u64) -> Result<ModSet> {
        let a = u64::try_from(self.a).map_err(|_| Error::Overflow)? % p;
        let c = u64::try_from(self.c).map_err(|_| Error::Overflow)? % p;
        let d = u64::try_from(self.d).map_err(|_| Error::Overflow)? % p;
        ModSet::from_unsorted(
            p,
            vec![a, crate::set::add_mod(a, d, p), c, crate::set::add_mod(c, d, p)],
        )
    }
}

/// Either witness kind, serialized flat as `{start,diff,len}` or `{a,c,d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Ap(ApWitness),
    BiPair(BiPairWitness),
}

/// Which structural case applies to a critical pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    NotCritical,
    EqualSmall,
    BiPair,
    StandardPair,
}

/// Structural verdict for an unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClassification {
    pub critical: bool,
    pub case_tag: CaseTag,
    pub witness: Option<Witness>,
}

impl PairClassification {
    fn not_critical() -> Self {
        PairClassification {
            critical: false,
            case_tag: CaseTag::NotCritical,
            witness: None,
        }
    }
}

/// Detect whether an integer set is an arithmetic progression with nonzero
/// difference. Sets with fewer than 2 elements are never standard.
pub fn detect_ap(x: &IntSet) -> Option<ApWitness> {
    let xs = x.elements();
    if xs.len() < 2 {
        return None;
    }
    let d = xs[1] - xs[0];
    for w in xs.windows(2) {
        if w[1] - w[0] != d {
            return None;
        }
    }
    Some(ApWitness {
        start: xs[0],
        diff: d,
        len: xs.len() as u64,
    })
}

/// Detect whether a residue set is an arithmetic progression mod p, returning
/// the canonical (minimal-difference) witness.
pub fn detect_ap_mod(x: &ModSet) -> Option<ApWitness> {
    ap_witnesses_mod(x).into_iter().next().map(|(d, tau)| ApWitness {
        start: tau as i64,
        diff: d as i64,
        len: x.len() as u64,
    })
}

/// Every (difference, start) pair witnessing `x` as an arithmetic progression
/// mod p, in increasing difference order. Candidate differences come from
/// element pairs, so the search is O(|X|^3 log p) regardless of p.
pub fn ap_witnesses_mod(x: &ModSet) -> Vec<(u64, u64)> {
    let p = x.modulus();
    let xs = x.elements();
    let k = xs.len() as u64;
    if k < 2 {
        return Vec::new();
    }
    if k == p {
        // The full group is a progression for every difference and start;
        // canonicalize to d = 1, start = 0.
        return vec![(1, 0)];
    }
    let mut cands = BTreeSet::new();
    for &a in xs {
        for &b in xs {
            if a != b {
                cands.insert((a + p - b) % p);
            }
        }
    }
    let mut out = Vec::new();
    for d in cands {
        if let Some(start_exp) = cyclic_run_start(xs, d, p) {
            out.push((d, crate::primes::mul_mod(start_exp, d, p)));
        }
    }
    out
}

/// If the exponents of `xs` with respect to `d` form a run of consecutive
/// residues (possibly wrapping p-1 -> 0), return the exponent the run starts
/// at.
fn cyclic_run_start(xs: &[u64], d: u64, p: u64) -> Option<u64> {
    let dinv = mod_inverse(d, p).expect("candidate differences are nonzero");
    let mut es: Vec<u64> = xs.iter().map(|&x| crate::primes::mul_mod(x, dinv, p)).collect();
    es.sort_unstable();
    let k = es.len();
    // A cyclic interval has exactly one cyclic neighbor-gap larger than 1
    // (k < p here, so the wrap gap es[0]+p-es[k-1] is at least 1).
    let mut big_gap_at = None;
    for i in 0..k - 1 {
        if es[i + 1] - es[i] > 1 {
            if big_gap_at.is_some() {
                return None;
            }
            big_gap_at = Some(i);
        }
    }
    match big_gap_at {
        None => Some(es[0]),
        Some(i) => {
            if es[0] + p - es[k - 1] == 1 {
                Some(es[i + 1])
            } else {
                None
            }
        }
    }
}

/// Detect the {a, a+d, c, c+d} pattern in a 4-element integer set. For sorted
/// elements x1<x2<x3<x4 the pattern holds iff x2-x1 = x4-x3; the witness is
/// (a, c, d) = (x1, x3, x2-x1).
pub fn detect_bi_pair(x: &IntSet) -> Result<Option<BiPairWitness>> {
    let xs = x.elements();
    if xs.len() != 4 {
        return Err(Error::Precondition(format!(
            "bi-pair detection needs exactly 4 elements (got {})",
            xs.len()
        )));
    }
    let d1 = (xs[1] as i128) - (xs[0] as i128);
    let d2 = (xs[3] as i128) - (xs[2] as i128);
    if d1 != d2 {
        return Ok(None);
    }
    let d = i64::try_from(d1).map_err(|_| Error::Overflow)?;
    Ok(Some(BiPairWitness {
        a: xs[0],
        c: xs[2],
        d,
    }))
}

/// Detect the {a, a+d, c, c+d} pattern mod p, searching every pairing of the
/// four elements and returning the witness with minimal d in [1, p-1]
/// (for fixed d the pairing is unique; a < c canonicalizes the rest).
pub fn detect_bi_pair_mod(x: &ModSet) -> Result<Option<BiPairWitness>> {
    let xs = x.elements();
    let p = x.modulus();
    if xs.len() != 4 {
        return Err(Error::Precondition(format!(
            "bi-pair detection needs exactly 4 elements (got {})",
            xs.len()
        )));
    }
    let mut best: Option<(u64, u64, u64)> = None; // (d, a, c)
    for &((i, j), (k, l)) in &[((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))] {
        for d in [(xs[j] + p - xs[i]) % p, (xs[i] + p - xs[j]) % p] {
            if d == 0 {
                continue;
            }
            let a = if (xs[i] + d) % p == xs[j] { xs[i] } else { xs[j] };
            let c = if (xs[k] + d) % p == xs[l] {
                xs[k]
            } else if (xs[l] + d) % p == xs[k] {
                xs[l]
            } else {
                continue;
            };
            let (a, c) = (a.min(c), a.max(c));
            if best.is_none_or(|(bd, ba, bc)| (d, a, c) < (bd, ba, bc)) {
                best = Some((d, a, c));
            }
        }
    }
    Ok(best.map(|(d, a, c)| BiPairWitness {
        a: a as i64,
        c: c as i64,
        d: d as i64,
    }))
}

/// A standard pair is A = B with A an arithmetic progression; returns the
/// progression witness in that case.
pub fn is_standard_pair(a: &IntSet, b: &IntSet) -> Option<ApWitness> {
    if a.len() < 2 || b.len() < 2 || a != b {
        return None;
    }
    detect_ap(a)
}

/// Modular variant of [`is_standard_pair`].
pub fn is_standard_pair_mod(a: &ModSet, b: &ModSet) -> Option<ApWitness> {
    if a.len() < 2 || b.len() < 2 || a != b {
        return None;
    }
    detect_ap_mod(a)
}

/// Structural criticality over Z, computed without evaluating any sumset:
/// the pair is critical iff A = B and A is two or three elements, a
/// 4-element bi-pair, or a progression of length at least 5.
pub fn predict_critical(a: &IntSet, b: &IntSet) -> Result<PairClassification> {
    require_pair_sizes(a.len(), b.len())?;
    if a != b {
        return Ok(PairClassification::not_critical());
    }
    classify_equal_sets(a.len(), || detect_bi_pair(a), || detect_ap(a))
}

/// Structural criticality over Z/pZ. Requires p >= |A|+|B|-2; outside that
/// hypothesis the characterization does not apply and the call fails with
/// [`Error::HypothesisViolation`] rather than guessing.
pub fn predict_critical_mod(a: &ModSet, b: &ModSet) -> Result<PairClassification> {
    let p = same_modulus(a, b)?;
    require_pair_sizes(a.len(), b.len())?;
    let (m, n) = (a.len() as u64, b.len() as u64);
    if p < m + n - 2 {
        return Err(Error::HypothesisViolation(format!(
            "p >= |A|+|B|-2 required (p = {p}, |A|+|B|-2 = {})",
            m + n - 2
        )));
    }
    if a != b {
        return Ok(PairClassification::not_critical());
    }
    classify_equal_sets(a.len(), || detect_bi_pair_mod(a), || detect_ap_mod(a))
}

fn classify_equal_sets(
    len: usize,
    bi_pair: impl FnOnce() -> Result<Option<BiPairWitness>>,
    ap: impl FnOnce() -> Option<ApWitness>,
) -> Result<PairClassification> {
    Ok(match len {
        2 | 3 => PairClassification {
            critical: true,
            case_tag: CaseTag::EqualSmall,
            witness: None,
        },
        // A 4-element progression is also a bi-pair (c = a+2d); the 4-element
        // case is tagged BiPair regardless.
        4 => match bi_pair()? {
            Some(w) => PairClassification {
                critical: true,
                case_tag: CaseTag::BiPair,
                witness: Some(Witness::BiPair(w)),
            },
            None => PairClassification::not_critical(),
        },
        _ => match ap() {
            Some(w) => PairClassification {
                critical: true,
                case_tag: CaseTag::StandardPair,
                witness: Some(Witness::Ap(w)),
            },
            None => PairClassification::not_critical(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iset(elems: &[i64]) -> IntSet {
        IntSet::new(elems.to_vec()).unwrap()
    }

    fn mset(p: u64, elems: &[u64]) -> ModSet {
        ModSet::new(p, elems.to_vec()).unwrap()
    }

    #[test]
    fn ap_detection_int() {
        assert_eq!(
            detect_ap(&iset(&[3, 5, 7, 9])),
            Some(ApWitness { start: 3, diff: 2, len: 4 })
        );
        assert_eq!(detect_ap(&iset(&[0, 1, 3, 4])), None);
        assert_eq!(detect_ap(&iset(&[7])), None);
        assert_eq!(
            detect_ap(&iset(&[-4, 1])),
            Some(ApWitness { start: -4, diff: 5, len: 2 })
        );
    }

    #[test]
    fn ap_detection_mod() {
        // several witnesses exist (e.g. d = 15 reading backwards); the
        // minimal-difference one is returned
        assert_eq!(
            detect_ap_mod(&mset(19, &[0, 4, 8, 12, 16])),
            Some(ApWitness { start: 0, diff: 4, len: 5 })
        );
        // wrapping progression 9,10,0,1,2
        assert_eq!(
            detect_ap_mod(&mset(11, &[0, 1, 2, 9, 10])),
            Some(ApWitness { start: 9, diff: 1, len: 5 })
        );
        assert_eq!(detect_ap_mod(&mset(11, &[0, 1, 3, 4, 6])), None);
        // full group: canonical witness is (0, 1)
        assert_eq!(
            detect_ap_mod(&mset(3, &[0, 1, 2])),
            Some(ApWitness { start: 0, diff: 1, len: 3 })
        );
    }

    #[test]
    fn ap_witnesses_enumerate_both_directions() {
        let ws = ap_witnesses_mod(&mset(11, &[0, 1, 2, 3, 4]));
        assert_eq!(ws, vec![(1, 0), (10, 4)]);
    }

    #[test]
    fn ap_witness_round_trip() {
        let x = mset(19, &[0, 4, 8, 12, 16]);
        for (d, tau) in ap_witnesses_mod(&x) {
            let w = ApWitness { start: tau as i64, diff: d as i64, len: 5 };
            assert_eq!(w.expand_mod(19).unwrap(), x, "d={d} tau={tau}");
        }
    }

    #[test]
    fn bi_pair_int() {
        assert_eq!(
            detect_bi_pair(&iset(&[0, 3, 5, 8])).unwrap(),
            Some(BiPairWitness { a: 0, c: 5, d: 3 })
        );
        // every 4-term progression is a bi-pair with c = a+2d
        assert_eq!(
            detect_bi_pair(&iset(&[0, 1, 2, 3])).unwrap(),
            Some(BiPairWitness { a: 0, c: 2, d: 1 })
        );
        assert_eq!(detect_bi_pair(&iset(&[0, 1, 2, 5])).unwrap(), None);
        assert!(matches!(
            detect_bi_pair(&iset(&[0, 1, 2])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bi_pair_mod_wraps() {
        // {0,1,3,5} = {1,3} u {5,0} with d = 2 wrapping mod 7 (d = 3, 4, 5
        // also witness it; 2 is minimal)
        let w = detect_bi_pair_mod(&mset(7, &[0, 1, 3, 5])).unwrap().unwrap();
        assert_eq!(w, BiPairWitness { a: 1, c: 5, d: 2 });
        assert_eq!(w.expand_mod(7).unwrap(), mset(7, &[0, 1, 3, 5]));
        assert_eq!(detect_bi_pair_mod(&mset(7, &[0, 1, 2, 4])).unwrap(), None);
        let w = detect_bi_pair_mod(&mset(11, &[0, 2, 3, 5])).unwrap().unwrap();
        let back = w.expand_mod(11).unwrap();
        assert_eq!(back, mset(11, &[0, 2, 3, 5]));
    }

    #[test]
    fn standard_pair_examples() {
        assert_eq!(
            is_standard_pair(&iset(&[2, 5, 8, 11, 14]), &iset(&[2, 5, 8, 11, 14])),
            Some(ApWitness { start: 2, diff: 3, len: 5 })
        );
        assert_eq!(is_standard_pair(&iset(&[0, 1, 2]), &iset(&[0, 1, 3])), None);
        assert_eq!(is_standard_pair(&iset(&[0, 1, 3, 4]), &iset(&[0, 1, 3, 4])), None);
    }

    #[test]
    fn predictor_int() {
        let c = predict_critical(&iset(&[1, 4]), &iset(&[1, 4])).unwrap();
        assert!(c.critical);
        assert_eq!(c.case_tag, CaseTag::EqualSmall);

        let c = predict_critical(&iset(&[0, 3, 5, 8]), &iset(&[0, 3, 5, 8])).unwrap();
        assert_eq!(c.case_tag, CaseTag::BiPair);
        assert_eq!(c.witness, Some(Witness::BiPair(BiPairWitness { a: 0, c: 5, d: 3 })));

        let c = predict_critical(&iset(&[0, 1, 2]), &iset(&[0, 1, 2, 3])).unwrap();
        assert!(!c.critical);
        assert_eq!(c.case_tag, CaseTag::NotCritical);

        // non-progression of length 5
        let c = predict_critical(&iset(&[0, 1, 2, 3, 5]), &iset(&[0, 1, 2, 3, 5])).unwrap();
        assert!(!c.critical);
    }

    #[test]
    fn predictor_mod() {
        let a = mset(11, &[0, 1, 2, 3, 4]);
        let c = predict_critical_mod(&a, &a).unwrap();
        assert!(c.critical);
        assert_eq!(c.case_tag, CaseTag::StandardPair);
        assert_eq!(c.witness, Some(Witness::Ap(ApWitness { start: 0, diff: 1, len: 5 })));

        // p < |A|+|B|-2: the characterization does not apply
        let t = mset(3, &[0, 1, 2]);
        assert!(matches!(
            predict_critical_mod(&t, &t),
            Err(Error::HypothesisViolation(_))
        ));

        assert!(matches!(
            predict_critical_mod(&mset(5, &[0, 1]), &mset(7, &[0, 1])),
            Err(Error::ModulusMismatch(5, 7))
        ));
    }

    #[test]
    fn four_element_ap_is_tagged_bi_pair() {
        let a = iset(&[0, 2, 4, 6]);
        let c = predict_critical(&a, &a).unwrap();
        assert_eq!(c.case_tag, CaseTag::BiPair);
        assert!(detect_ap(&a).is_some());
    }

    #[test]
    fn classification_serializes_flat() {
        let c = PairClassification {
            critical: true,
            case_tag: CaseTag::StandardPair,
            witness: Some(Witness::Ap(ApWitness { start: 0, diff: 2, len: 5 })),
        };
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"critical":true,"case_tag":"StandardPair","witness":{"start":0,"diff":2,"len":5}}"#
        );
        let back: PairClassification = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}

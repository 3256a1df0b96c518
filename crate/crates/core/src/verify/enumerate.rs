//! Pair enumeration: admissible subset masks, the linearized unordered pair
//! index, and translation canonicalization.

use crate::error::{Error, Result};
use crate::verify::{SweepContext, SweepSpec};

/// Pairs per enumeration chunk. Fixed so that chunk boundaries (and thus
/// checkpoints) do not depend on the worker count.
pub(crate) const CHUNK_PAIRS: u64 = 1 << 15;

/// The subsets a sweep ranges over, as bit masks in ascending order.
pub(crate) struct Universe {
    pub context: SweepContext,
    pub masks: Vec<u32>,
}

impl Universe {
    pub fn build(spec: &SweepSpec) -> Self {
        let size = spec.context.universe_size();
        let mut masks = Vec::new();
        for m in 1u32..(1u32 << size) {
            let k = m.count_ones();
            if k >= spec.min_size && k <= spec.max_size {
                masks.push(m);
            }
        }
        Universe {
            context: spec.context,
            masks,
        }
    }

    pub fn total_pairs(&self) -> u64 {
        let l = self.masks.len() as u64;
        l * (l + 1) / 2
    }
}

/// C(n, k) for the tiny universes used here.
fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of admissible subsets, closed form (no enumeration).
pub(crate) fn admissible_count(universe: u32, min_size: u32, max_size: u32) -> u64 {
    (min_size..=max_size.min(universe))
        .map(|k| binomial(universe as u64, k as u64))
        .sum()
}

/// Estimated pairs a sweep will process. Without normalization this is the
/// raw unordered pair count. With it, Z windows have an exact representative
/// count (the representatives are precisely the pairs whose union contains
/// 0, so subtract the pairs that fit entirely in {1..N-1}); mod-p orbits
/// almost all have p members, so divide.
pub(crate) fn estimate_pairs(spec: &SweepSpec) -> u64 {
    let universe = spec.context.universe_size();
    let pairs = |width: u32| {
        let subsets = admissible_count(width, spec.min_size, spec.max_size);
        subsets * (subsets + 1) / 2
    };
    let raw = pairs(universe);
    if !spec.normalize {
        return raw;
    }
    match spec.context {
        SweepContext::IntWindow { n } => raw - pairs(n - 1),
        SweepContext::ModP { p } => (raw / p).max(1),
    }
}

pub(crate) fn enforce_budget(spec: &SweepSpec) -> Result<()> {
    let estimated = estimate_pairs(spec);
    if estimated > spec.budget {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: spec.budget,
        });
    }
    Ok(())
}

/// Pair index k in [0, L(L+1)/2) maps to (i, j) with i <= j: row i covers
/// indices [row_start(i), row_start(i+1)).
pub(crate) fn row_start(l: u64, i: u64) -> u64 {
    i * (2 * l - i + 1) / 2
}

pub(crate) fn decode_pair_index(l: u64, k: u64) -> (usize, usize) {
    debug_assert!(k < row_start(l, l).max(1) || l == 0);
    let (mut lo, mut hi) = (0u64, l);
    // largest i with row_start(i) <= k
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if row_start(l, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let i = lo;
    let j = i + (k - row_start(l, i));
    (i as usize, j as usize)
}

/// Cyclic left rotation of a p-bit mask.
#[inline]
pub(crate) fn rot32(m: u32, k: u32, p: u32) -> u32 {
    debug_assert!(k < p && p < 32);
    ((m << k) | (m >> (p - k))) & ((1u32 << p) - 1)
}

/// Is (a, b) the canonical representative of its joint-translation orbit?
///
/// Z windows: translation classes that fit the window have exactly one
/// member whose union contains 0. Mod p: the orbit member with the
/// lexicographically smallest (a, b) mask pair wins.
#[inline]
pub(crate) fn is_canonical(a: u32, b: u32, ctx: SweepContext) -> bool {
    match ctx {
        SweepContext::IntWindow { .. } => (a | b) & 1 == 1,
        SweepContext::ModP { p } => {
            let p = p as u32;
            for t in 1..p {
                let (ra, rb) = (rot32(a, t, p), rot32(b, t, p));
                // unordered pairs are encoded with the smaller mask first
                let rot = if ra <= rb { (ra, rb) } else { (rb, ra) };
                if rot < (a, b) {
                    return false;
                }
            }
            true
        }
    }
}

/// Iterator over the unordered pairs of a sweep, as subset masks.
#[derive(Debug)]
pub struct PairIter {
    masks: Vec<u32>,
    context: SweepContext,
    normalize: bool,
    i: usize,
    j: usize,
}

impl Iterator for PairIter {
    type Item = (u32, u32);

    fn next(&mut self) -> Option<(u32, u32)> {
        loop {
            if self.i >= self.masks.len() {
                return None;
            }
            let pair = (self.masks[self.i], self.masks[self.j]);
            self.j += 1;
            if self.j == self.masks.len() {
                self.i += 1;
                self.j = self.i;
            }
            if !self.normalize || is_canonical(pair.0, pair.1, self.context) {
                return Some(pair);
            }
        }
    }
}

pub(crate) fn pair_iter(spec: &SweepSpec) -> Result<PairIter> {
    spec.validate()?;
    enforce_budget(spec)?;
    let universe = Universe::build(spec);
    Ok(PairIter {
        masks: universe.masks,
        context: spec.context,
        normalize: spec.normalize,
        i: 0,
        j: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Theorem;

    #[test]
    fn golden_pair_counts() {
        // window 3, sizes >= 2: subsets {0,1},{0,2},{1,2},{0,1,2} -> C(4,2)+4
        let mut spec = SweepSpec::new(SweepContext::IntWindow { n: 3 }, Theorem::T1);
        spec.normalize = false;
        assert_eq!(pair_iter(&spec).unwrap().count(), 10);

        // mod 5, sizes >= 2: 2^5 - 5 - 1 = 26 subsets -> C(26,2) + 26 = 351
        let spec = SweepSpec::new(SweepContext::ModP { p: 5 }, Theorem::Karolyi);
        assert_eq!(admissible_count(5, 2, 5), 26);
        assert_eq!(pair_iter(&spec).unwrap().count(), 351);

        // window 1: no 2-element subsets
        let spec = SweepSpec::new(SweepContext::IntWindow { n: 1 }, Theorem::T1);
        assert_eq!(pair_iter(&spec).unwrap().count(), 0);
    }

    #[test]
    fn each_pair_appears_once() {
        let mut spec = SweepSpec::new(SweepContext::IntWindow { n: 5 }, Theorem::T1);
        spec.normalize = false;
        let pairs: Vec<_> = pair_iter(&spec).unwrap().collect();
        let mut dedup = pairs.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(pairs.len(), dedup.len());
        assert!(pairs.iter().all(|&(a, b)| a <= b));
        let universe = Universe::build(&spec);
        assert_eq!(pairs.len() as u64, universe.total_pairs());
    }

    #[test]
    fn normalization_keeps_one_representative_per_orbit() {
        // window: representatives are exactly the pairs whose union hits 0
        let mut spec = SweepSpec::new(SweepContext::IntWindow { n: 4 }, Theorem::T1);
        spec.normalize = true;
        for (a, b) in pair_iter(&spec).unwrap() {
            assert_eq!((a | b) & 1, 1);
        }

        // mod p: count orbits directly against the unnormalized enumeration
        let p = 5u32;
        let mut spec = SweepSpec::new(SweepContext::ModP { p: 5 }, Theorem::Karolyi);
        spec.normalize = false;
        let mut canonical = std::collections::BTreeSet::new();
        for (a, b) in pair_iter(&spec).unwrap() {
            let orbit_min = (0..p)
                .map(|t| {
                    let (ra, rb) = (rot32(a, t, p), rot32(b, t, p));
                    if ra <= rb { (ra, rb) } else { (rb, ra) }
                })
                .min()
                .unwrap();
            canonical.insert(orbit_min);
        }
        spec.normalize = true;
        let reps: Vec<_> = pair_iter(&spec).unwrap().collect();
        assert_eq!(reps.len(), canonical.len());
        for pair in &reps {
            assert!(canonical.contains(pair));
        }
    }

    #[test]
    fn index_decoding_round_trips() {
        for l in [1u64, 2, 3, 10, 101] {
            let mut k = 0u64;
            for i in 0..l {
                for j in i..l {
                    assert_eq!(decode_pair_index(l, k), (i as usize, j as usize));
                    k += 1;
                }
            }
            assert_eq!(k, l * (l + 1) / 2);
        }
    }

    #[test]
    fn budget_gate_refuses_wide_sweeps() {
        let spec = SweepSpec::new(SweepContext::ModP { p: 19 }, Theorem::T4);
        match pair_iter(&spec) {
            Err(crate::Error::BudgetExceeded { estimated, .. }) => {
                assert!(estimated > 100_000_000_000);
            }
            other => panic!("expected budget refusal, got {other:?}"),
        }
        // with size filters the same prime is fine
        let mut spec = SweepSpec::new(SweepContext::ModP { p: 19 }, Theorem::T4);
        spec.min_size = 2;
        spec.max_size = 4;
        assert!(pair_iter(&spec).is_ok());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        use crate::Error;
        let spec = SweepSpec::new(SweepContext::IntWindow { n: 17 }, Theorem::T1);
        assert!(matches!(spec.validate(), Err(Error::Precondition(_))));
        let spec = SweepSpec::new(SweepContext::ModP { p: 9 }, Theorem::T5);
        assert!(matches!(spec.validate(), Err(Error::NonPrimeModulus(9))));
        let spec = SweepSpec::new(SweepContext::ModP { p: 29 }, Theorem::T5);
        assert!(matches!(spec.validate(), Err(Error::Precondition(_))));
        let spec = SweepSpec::new(SweepContext::IntWindow { n: 8 }, Theorem::Karolyi);
        assert!(matches!(spec.validate(), Err(Error::Precondition(_))));
        let spec = SweepSpec::new(SweepContext::ModP { p: 7 }, Theorem::Lemmas);
        assert!(matches!(spec.validate(), Err(Error::Precondition(_))));
        let mut spec = SweepSpec::new(SweepContext::IntWindow { n: 8 }, Theorem::T1);
        spec.min_size = 0;
        assert!(matches!(spec.validate(), Err(Error::Precondition(_))));
    }
}

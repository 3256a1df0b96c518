//! Chunked, data-parallel sweep execution.
//!
//! The pair index space is cut into fixed-size chunks. Workers pull chunk
//! ids from a shared cursor, tally each chunk independently, and send the
//! results to the coordinating thread, which merges them and periodically
//! writes a checkpoint. Merging is commutative (counters sum, the
//! counterexample list is sorted by global pair index at the end), so the
//! final report does not depend on worker count or completion order.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bitwin;
use crate::classify::{self, ap_witnesses_mod};
use crate::error::{Error, Result};
use crate::gaps::{self, GapMode};
use crate::verify::checkpoint::Checkpoint;
use crate::verify::enumerate::{
    decode_pair_index, enforce_budget, is_canonical, Universe, CHUNK_PAIRS,
};
use crate::verify::{
    BandStats, Counterexample, Counts, GapSummary, RunMode, SweepContext, SweepSpec, Theorem,
    VerifyReport,
};

/// Result of a (possibly chunk-limited) sweep run.
#[derive(Debug)]
pub enum SweepOutcome {
    Complete(VerifyReport),
    /// The chunk limit was reached; progress lives in the checkpoint file.
    Suspended {
        completed_chunks: u64,
        total_chunks: u64,
    },
}

/// A counterexample plus the pair index it was found at; the index orders
/// merged lists deterministically and is dropped from the final report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct IndexedCe {
    pub index: u64,
    #[serde(flatten)]
    pub ce: Counterexample,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub(crate) struct Tally {
    pub enumerated: u64,
    pub after_normalization: u64,
    pub checked: u64,
    pub agreements: u64,
    pub ce_total: u64,
    pub ces: Vec<IndexedCe>,
    pub band: BandStats,
    pub gap: GapSummary,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.enumerated += other.enumerated;
        self.after_normalization += other.after_normalization;
        self.checked += other.checked;
        self.agreements += other.agreements;
        self.ce_total += other.ce_total;
        self.ces.extend(other.ces);
        self.band.checked += other.band.checked;
        self.band.agreements += other.band.agreements;
        self.band.disagreements += other.band.disagreements;
        self.gap.standard_checked += other.gap.standard_checked;
        self.gap.min_linear_gap = min_opt(self.gap.min_linear_gap, other.gap.min_linear_gap);
        self.gap.min_cyclic_gap = min_opt(self.gap.min_cyclic_gap, other.gap.min_cyclic_gap);
        self.gap.nonstandard_seen += other.gap.nonstandard_seen;
        self.gap.nonstandard_min_best_gap = min_opt(
            self.gap.nonstandard_min_best_gap,
            other.gap.nonstandard_min_best_gap,
        );
    }

    fn record(&mut self, outcome: PairOutcome, index: u64, cap: u64) {
        match outcome {
            PairOutcome::Skipped => {}
            PairOutcome::Checked { agree, band, ce } => {
                self.checked += 1;
                if band {
                    self.band.checked += 1;
                }
                if agree {
                    self.agreements += 1;
                    if band {
                        self.band.agreements += 1;
                    }
                } else {
                    self.ce_total += 1;
                    if band {
                        self.band.disagreements += 1;
                    }
                    if (self.ces.len() as u64) < cap {
                        self.ces.push(IndexedCe {
                            index,
                            ce: ce.expect("disagreements carry a counterexample"),
                        });
                    }
                }
            }
        }
    }
}

fn min_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

enum PairOutcome {
    /// The selector's hypotheses do not cover this pair.
    Skipped,
    Checked {
        agree: bool,
        /// Pair lies in the boundary band p < |A|+|B| (mod p only).
        band: bool,
        ce: Option<Counterexample>,
    },
}

/// Per-sweep immutable checking state.
struct PairChecker {
    context: SweepContext,
    theorem: Theorem,
    gap_linear: bool,
    gap_cyclic: bool,
}

impl PairChecker {
    fn new(spec: &SweepSpec) -> Self {
        PairChecker {
            context: spec.context,
            theorem: spec.theorem,
            gap_linear: spec.gap_mode.linear(),
            gap_cyclic: spec.gap_mode.cyclic(),
        }
    }

    fn restricted_size(&self, a: u32, b: u32) -> u64 {
        match self.context {
            SweepContext::IntWindow { .. } => {
                bitwin::restricted_sumset_bits(a as u64, b as u64).count_ones() as u64
            }
            SweepContext::ModP { p } => {
                bitwin::restricted_sumset_bits_mod(a as u128, b as u128, p as u32).count_ones()
                    as u64
            }
        }
    }

    fn plain_size(&self, a: u32, b: u32) -> u64 {
        match self.context {
            SweepContext::IntWindow { .. } => {
                bitwin::sumset_bits(a as u64, b as u64).count_ones() as u64
            }
            SweepContext::ModP { p } => {
                bitwin::sumset_bits_mod(a as u128, b as u128, p as u32).count_ones() as u64
            }
        }
    }

    fn render(&self, mask: u32) -> String {
        match self.context {
            SweepContext::IntWindow { .. } => bitwin::intset_from_bits(mask as u128).to_string(),
            SweepContext::ModP { p } => bitwin::modset_from_bits(mask as u128, p).to_string(),
        }
    }

    /// Structural verdict for a diagonal pair (a == b), via the classify
    /// module.
    fn predict_equal(&self, mask: u32) -> bool {
        match self.context {
            SweepContext::IntWindow { .. } => {
                let s = bitwin::intset_from_bits(mask as u128);
                classify::predict_critical(&s, &s)
                    .expect("hypotheses pre-checked by the sweep filter")
                    .critical
            }
            SweepContext::ModP { p } => {
                let s = bitwin::modset_from_bits(mask as u128, p);
                classify::predict_critical_mod(&s, &s)
                    .expect("hypotheses pre-checked by the sweep filter")
                    .critical
            }
        }
    }

    fn check(&self, a: u32, b: u32, tally: &mut Tally) -> PairOutcome {
        match self.theorem {
            Theorem::T1 | Theorem::T2 | Theorem::T3 | Theorem::T4 | Theorem::T5 | Theorem::Karolyi => {
                self.check_characterization(a, b)
            }
            Theorem::Lemmas => self.check_lemmas(a, b),
            Theorem::T6 => self.check_gap(a, b, tally),
            Theorem::T7 => self.check_standard_pair(a, b),
        }
    }

    /// Oracle vs structural predictor, under the selector's hypotheses.
    fn check_characterization(&self, a: u32, b: u32) -> PairOutcome {
        let (m, n) = (a.count_ones(), b.count_ones());
        if m < 2 || n < 2 {
            return PairOutcome::Skipped;
        }
        if let Some(bucket) = self.theorem.size_bucket() {
            let small = m.min(n);
            let hit = if bucket == 5 { small >= 5 } else { small == bucket };
            if !hit {
                return PairOutcome::Skipped;
            }
        }
        let mut band = false;
        if let SweepContext::ModP { p } = self.context {
            if p < (m + n - 2) as u64 {
                return PairOutcome::Skipped;
            }
            if self.theorem == Theorem::T5 {
                let max_sum = (31 - a.leading_zeros()) as u64 + (31 - b.leading_zeros()) as u64;
                if max_sum >= p {
                    return PairOutcome::Skipped;
                }
            }
            band = p < (m + n) as u64;
        }
        let size = self.restricted_size(a, b);
        let oracle = size == (m + n - 3) as u64;
        let predicted = a == b && self.predict_equal(a);
        PairOutcome::Checked {
            agree: oracle == predicted,
            band,
            ce: if oracle == predicted {
                None
            } else {
                Some(Counterexample {
                    a: self.render(a),
                    b: self.render(b),
                    oracle: verdict(oracle),
                    predicted: verdict(predicted),
                    sumset_size: size,
                })
            },
        }
    }

    /// The Z lower bounds and the descent property.
    fn check_lemmas(&self, a: u32, b: u32) -> PairOutcome {
        let (m, n) = (a.count_ones() as u64, b.count_ones() as u64);
        let plain = self.plain_size(a, b);
        let restricted = self.restricted_size(a, b);
        let mut violations: Vec<String> = Vec::new();

        if plain < m + n - 1 {
            violations.push(format!("|A+B| = {plain} < {}", m + n - 1));
        }
        if restricted < (m + n).saturating_sub(3) {
            violations.push(format!("|A+^B| = {restricted} < {}", m + n - 3));
        }
        if m >= 2 && n >= 2 {
            if a != b && restricted < m + n - 2 {
                violations.push(format!("A != B but |A+^B| = {restricted} < {}", m + n - 2));
            }
            if restricted == m + n - 3 {
                let orientations: &[(u32, u32)] = if a == b { &[(a, b)] } else { &[(a, b), (b, a)] };
                for &(s, t) in orientations {
                    // descent applies to critical pairs with T inside S
                    if t & !s != 0 || s.count_ones() < 5 || t.count_ones() < 2 {
                        continue;
                    }
                    let (max_s, max_t) = (31 - s.leading_zeros(), 31 - t.leading_zeros());
                    if max_s != max_t {
                        violations.push(format!("max elements differ: {max_s} vs {max_t}"));
                        continue;
                    }
                    if t.count_ones() >= 3 {
                        let s2 = s & !(1 << max_s);
                        let t2 = t & !(1 << max_t);
                        let r2 = self.restricted_size(s2, t2);
                        let want = (s2.count_ones() + t2.count_ones() - 3) as u64;
                        if r2 != want {
                            violations.push(format!(
                                "descent pair has |X+^Y| = {r2}, expected {want}"
                            ));
                        }
                    }
                }
            }
        }

        if violations.is_empty() {
            PairOutcome::Checked { agree: true, band: false, ce: None }
        } else {
            PairOutcome::Checked {
                agree: false,
                band: false,
                ce: Some(Counterexample {
                    a: self.render(a),
                    b: self.render(b),
                    oracle: violations.join("; "),
                    predicted: "all lower bounds and descent hold".into(),
                    sumset_size: restricted,
                }),
            }
        }
    }

    /// Longest-gap lower bound for critical pairs with a standard first
    /// component; gap data for non-standard ones is recorded, not asserted.
    fn check_gap(&self, a: u32, b: u32, tally: &mut Tally) -> PairOutcome {
        let Some((p, orientations)) = self.mod_orientations(a, b) else {
            return PairOutcome::Skipped;
        };
        let mut checked_any = false;
        let mut failures: Vec<String> = Vec::new();
        let mut restricted = 0;
        for (s, t) in orientations {
            restricted = self.restricted_size(a, b);
            let required = s.count_ones() as u64;
            let s_set = bitwin::modset_from_bits(s as u128, p);
            let t_set = bitwin::modset_from_bits(t as u128, p);
            let wits = ap_witnesses_mod(&s_set);
            if wits.is_empty() {
                tally.gap.nonstandard_seen += 1;
                let best = gaps::longest_gap_over_generators(&t_set, GapMode::Cyclic)
                    .expect("nonempty set, valid generators")
                    .into_iter()
                    .map(|(_, g)| g)
                    .max()
                    .unwrap_or(0);
                tally.gap.nonstandard_min_best_gap =
                    min_opt(tally.gap.nonstandard_min_best_gap, Some(best));
                continue;
            }
            checked_any = true;
            tally.gap.standard_checked += 1;
            for (d, tau) in wits {
                let shifted = t_set.translate((p - tau % p) % p);
                if self.gap_linear {
                    let g = gaps::exponent_profile(&shifted, d, GapMode::Linear)
                        .expect("valid generator")
                        .longest_gap;
                    tally.gap.min_linear_gap = min_opt(tally.gap.min_linear_gap, Some(g));
                    if g < required {
                        failures.push(format!("linear gap {g} < {required} for d={d}"));
                    }
                }
                if self.gap_cyclic {
                    let g = gaps::exponent_profile(&shifted, d, GapMode::Cyclic)
                        .expect("valid generator")
                        .longest_gap;
                    tally.gap.min_cyclic_gap = min_opt(tally.gap.min_cyclic_gap, Some(g));
                    if g < required {
                        failures.push(format!("cyclic gap {g} < {required} for d={d}"));
                    }
                }
            }
        }
        if !checked_any {
            return PairOutcome::Skipped;
        }
        PairOutcome::Checked {
            agree: failures.is_empty(),
            band: false,
            ce: if failures.is_empty() {
                None
            } else {
                Some(Counterexample {
                    a: self.render(a),
                    b: self.render(b),
                    oracle: failures.join("; "),
                    predicted: "longest gap >= |A| for every witness difference".into(),
                    sumset_size: restricted,
                })
            },
        }
    }

    /// Critical pairs with a standard component of size >= 5 must be
    /// standard pairs (equal sets).
    fn check_standard_pair(&self, a: u32, b: u32) -> PairOutcome {
        let Some((p, orientations)) = self.mod_orientations(a, b) else {
            return PairOutcome::Skipped;
        };
        let mut checked_any = false;
        let mut failure = None;
        for (s, t) in orientations {
            let s_set = bitwin::modset_from_bits(s as u128, p);
            if ap_witnesses_mod(&s_set).is_empty() {
                continue;
            }
            checked_any = true;
            if s != t {
                failure = Some("critical with standard component but A != B".to_string());
            }
        }
        if !checked_any {
            return PairOutcome::Skipped;
        }
        PairOutcome::Checked {
            agree: failure.is_none(),
            band: false,
            ce: failure.map(|oracle| Counterexample {
                a: self.render(a),
                b: self.render(b),
                oracle,
                predicted: "standard pair (A = B)".into(),
                sumset_size: self.restricted_size(a, b),
            }),
        }
    }

    /// Shared T6/T7 hypothesis gate: critical, p >= |A|+|B|, and at least
    /// one orientation whose first component has >= 5 elements. Returns the
    /// qualifying orientations.
    fn mod_orientations(&self, a: u32, b: u32) -> Option<(u64, Vec<(u32, u32)>)> {
        let SweepContext::ModP { p } = self.context else {
            return None;
        };
        let (m, n) = (a.count_ones(), b.count_ones());
        if m < 2 || n < 2 || m.max(n) < 5 || p < (m + n) as u64 {
            return None;
        }
        if self.restricted_size(a, b) != (m + n - 3) as u64 {
            return None;
        }
        let mut orientations = Vec::with_capacity(2);
        if m >= 5 {
            orientations.push((a, b));
        }
        if n >= 5 && a != b {
            orientations.push((b, a));
        }
        Some((p, orientations))
    }
}

fn verdict(critical: bool) -> String {
    if critical { "critical".into() } else { "not critical".into() }
}

fn run_chunk(
    universe: &Universe,
    checker: &PairChecker,
    normalize: bool,
    start: u64,
    end: u64,
    cap: u64,
) -> Tally {
    let masks = &universe.masks;
    let l = masks.len() as u64;
    let (mut i, mut j) = decode_pair_index(l, start);
    let mut tally = Tally::default();
    for index in start..end {
        let (a, b) = (masks[i], masks[j]);
        tally.enumerated += 1;
        if !normalize || is_canonical(a, b, universe.context) {
            tally.after_normalization += 1;
            let outcome = checker.check(a, b, &mut tally);
            tally.record(outcome, index, cap);
        }
        j += 1;
        if j as u64 == l {
            i += 1;
            j = i;
        }
    }
    tally
}

pub(crate) fn run_to_completion(
    spec: &SweepSpec,
    mode: RunMode,
    resume: bool,
) -> Result<VerifyReport> {
    match run(spec, mode, resume, None)? {
        SweepOutcome::Complete(report) => Ok(report),
        SweepOutcome::Suspended { .. } => unreachable!("no chunk limit was set"),
    }
}

pub(crate) fn run(
    spec: &SweepSpec,
    mode: RunMode,
    resume: bool,
    max_chunks: Option<usize>,
) -> Result<SweepOutcome> {
    spec.validate()?;
    enforce_budget(spec)?;
    let started = Instant::now();
    let echo = spec.echo(mode);
    let spec_hash = echo.sha256();

    let universe = Universe::build(spec);
    let total_pairs = universe.total_pairs();
    let total_chunks = total_pairs.div_ceil(CHUNK_PAIRS).max(1);

    let mut merged = Tally::default();
    let mut done: BTreeSet<u64> = BTreeSet::new();
    let mut prior_elapsed = 0u64;
    if resume {
        let path = spec.checkpoint.as_deref().ok_or_else(|| {
            Error::Checkpoint("resume requested but no checkpoint path configured".into())
        })?;
        let cp = Checkpoint::load(path)?;
        cp.compatible_with(&spec_hash, CHUNK_PAIRS, total_pairs)?;
        merged = cp.tally;
        done = cp.done_chunks.into_iter().collect();
        prior_elapsed = cp.elapsed_ms;
    }

    let mut pending: Vec<u64> = (0..total_chunks).filter(|c| !done.contains(c)).collect();
    if let Some(limit) = max_chunks {
        pending.truncate(limit);
    }
    let suspended = (done.len() as u64 + pending.len() as u64) < total_chunks;

    let workers = if spec.workers == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        spec.workers
    }
    .min(pending.len().max(1));

    let checker = PairChecker::new(spec);
    let cap = spec.counterexample_cap;
    let normalize = spec.normalize;
    let cursor = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(u64, Tally)>();
    // write the checkpoint roughly 16 times over the run, and always at the end
    let write_every = (total_chunks / 16).max(1);

    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..workers {
            let tx = tx.clone();
            let pending = &pending;
            let cursor = &cursor;
            let universe = &universe;
            let checker = &checker;
            scope.spawn(move || loop {
                let slot = cursor.fetch_add(1, Ordering::Relaxed);
                if slot >= pending.len() {
                    break;
                }
                let chunk = pending[slot];
                let start = chunk * CHUNK_PAIRS;
                let end = (start + CHUNK_PAIRS).min(total_pairs);
                let tally = run_chunk(universe, checker, normalize, start, end, cap);
                if tx.send((chunk, tally)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut since_write = 0u64;
        while let Ok((chunk, tally)) = rx.recv() {
            merged.merge(tally);
            done.insert(chunk);
            since_write += 1;
            if since_write >= write_every {
                since_write = 0;
                write_checkpoint(spec, &spec_hash, total_pairs, &done, &merged, prior_elapsed, started)?;
            }
        }
        Ok(())
    })?;

    if spec.checkpoint.is_some() {
        write_checkpoint(spec, &spec_hash, total_pairs, &done, &merged, prior_elapsed, started)?;
    }

    if suspended {
        return Ok(SweepOutcome::Suspended {
            completed_chunks: done.len() as u64,
            total_chunks,
        });
    }

    debug_assert_eq!(merged.agreements + merged.ce_total, merged.checked);
    // deterministic assembly: order by discovery index, then truncate
    merged.ces.sort_by_key(|c| c.index);
    merged.ces.truncate(cap as usize);
    let counterexamples = merged.ces.into_iter().map(|c| c.ce).collect();

    let has_band = spec.context.is_mod() && !matches!(spec.theorem, Theorem::T6 | Theorem::T7);
    Ok(SweepOutcome::Complete(VerifyReport {
        spec: echo,
        counts: Counts {
            enumerated: merged.enumerated,
            after_normalization: merged.after_normalization,
            checked: merged.checked,
            agreements: merged.agreements,
            counterexamples: merged.ce_total,
        },
        counterexamples,
        boundary_band: has_band.then_some(merged.band),
        gap_summary: (spec.theorem == Theorem::T6).then_some(merged.gap),
        elapsed_ms: prior_elapsed + started.elapsed().as_millis() as u64,
    }))
}

#[allow(clippy::too_many_arguments)]
fn write_checkpoint(
    spec: &SweepSpec,
    spec_hash: &str,
    total_pairs: u64,
    done: &BTreeSet<u64>,
    merged: &Tally,
    prior_elapsed: u64,
    started: Instant,
) -> Result<()> {
    let Some(path) = spec.checkpoint.as_deref() else {
        return Ok(());
    };
    let cp = Checkpoint {
        version: Checkpoint::VERSION,
        spec_sha256: spec_hash.to_string(),
        chunk_pairs: CHUNK_PAIRS,
        total_pairs,
        done_chunks: done.iter().copied().collect(),
        tally: merged.clone(),
        elapsed_ms: prior_elapsed + started.elapsed().as_millis() as u64,
    };
    cp.save(path)
}

//! Exhaustive verification sweeps.
//!
//! A sweep enumerates every unordered pair of subsets of a bounded universe
//! (a Z window {0..N-1} or Z/pZ), applies a theorem selector's hypotheses,
//! and compares the brute-force verdict against the structural one, tallying
//! agreements and recording disagreements as counterexamples. Sweeps are
//! data-parallel over fixed-size chunks of the pair index space, resumable
//! from checkpoints, and produce reports that are byte-identical for any
//! worker count.

mod checkpoint;
mod engine;
mod enumerate;

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::is_prime;

pub use checkpoint::Checkpoint;
pub use engine::SweepOutcome;
pub use enumerate::PairIter;

/// Hard cap on Z windows: beyond this the raw pair space outgrows desk scale.
pub const MAX_INT_WINDOW: u32 = 16;

/// Hard cap on mod-p sweep moduli; primes above 13 additionally need size
/// filters to pass the budget gate.
pub const MAX_SWEEP_PRIME: u64 = 23;

/// Default ceiling on the number of pairs a sweep may process. Sized so a
/// full-width Z window passes while full mod-p enumeration beyond p = 13
/// needs size filters.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

/// Default cap on the counterexample list kept in a report; the exact total
/// count is always retained.
pub const DEFAULT_CE_CAP: u64 = 100;

/// Universe a sweep enumerates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepContext {
    /// Subsets of {0, ..., n-1} in Z.
    IntWindow { n: u32 },
    /// Subsets of Z/pZ.
    ModP { p: u64 },
}

impl SweepContext {
    pub fn universe_size(self) -> u32 {
        match self {
            SweepContext::IntWindow { n } => n,
            SweepContext::ModP { p } => p as u32,
        }
    }

    pub fn is_mod(self) -> bool {
        matches!(self, SweepContext::ModP { .. })
    }
}

impl fmt::Display for SweepContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepContext::IntWindow { n } => write!(f, "window {n}"),
            SweepContext::ModP { p } => write!(f, "mod {p}"),
        }
    }
}

/// Which claim a sweep checks.
///
/// T1-T4 check the structural characterization bucketed by the smaller
/// cardinality (2, 3, 4, >= 5); over Z they are unconditional, mod p they run
/// under p >= |A|+|B|-2. T5 adds the max(A)+max(B) < p filter. T6 checks the
/// gap lower bound, T7 the standard-pair conclusion, both under p >= |A|+|B|.
/// KAROLYI is the full characterization mod p without a size bucket. LEMMAS
/// checks the Z lower bounds (|A+B|, |A+^B|, the A != B strengthening) and
/// the descent property of critical pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    Karolyi,
    Lemmas,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::T1,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::T6,
        Theorem::T7,
        Theorem::Karolyi,
        Theorem::Lemmas,
    ];

    pub fn allows_int(self) -> bool {
        matches!(
            self,
            Theorem::T1 | Theorem::T2 | Theorem::T3 | Theorem::T4 | Theorem::Lemmas
        )
    }

    pub fn allows_mod(self) -> bool {
        !matches!(self, Theorem::Lemmas)
    }

    /// The size bucket (value of min(|A|,|B|)) a T1-T4 selector restricts to.
    pub(crate) fn size_bucket(self) -> Option<u32> {
        match self {
            Theorem::T1 => Some(2),
            Theorem::T2 => Some(3),
            Theorem::T3 => Some(4),
            Theorem::T4 => Some(5),
            _ => None,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::T4 => "T4",
            Theorem::T5 => "T5",
            Theorem::T6 => "T6",
            Theorem::T7 => "T7",
            Theorem::Karolyi => "KAROLYI",
            Theorem::Lemmas => "LEMMAS",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Theorem::T1),
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "T4" => Ok(Theorem::T4),
            "T5" => Ok(Theorem::T5),
            "T6" => Ok(Theorem::T6),
            "T7" => Ok(Theorem::T7),
            "KAROLYI" => Ok(Theorem::Karolyi),
            "LEMMAS" => Ok(Theorem::Lemmas),
            other => Err(Error::Parse(format!("unknown theorem selector {other:?}"))),
        }
    }
}

/// Which gap modes a T6 sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapModeChoice {
    Linear,
    Cyclic,
    Both,
}

impl GapModeChoice {
    pub(crate) fn linear(self) -> bool {
        matches!(self, GapModeChoice::Linear | GapModeChoice::Both)
    }

    pub(crate) fn cyclic(self) -> bool {
        matches!(self, GapModeChoice::Cyclic | GapModeChoice::Both)
    }
}

/// Assert mode treats disagreements as failures (CLI exit 1); search mode
/// records them and always reports cleanly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Assert,
    Search,
}

/// Full description of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub context: SweepContext,
    pub theorem: Theorem,
    pub min_size: u32,
    pub max_size: u32,
    /// Keep one representative per joint-translation class. Criticality and
    /// every checked predicate are invariant under A -> A+t, B -> B+t.
    pub normalize: bool,
    pub gap_mode: GapModeChoice,
    pub counterexample_cap: u64,
    pub budget: u64,
    /// 0 means one worker per available core.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
}

impl SweepSpec {
    /// Spec with the defaults: sizes >= 2 (>= 1 for LEMMAS, whose bounds
    /// cover singletons), translation normalization on for Z windows and off
    /// for mod p (where full sweeps are the stated guarantee).
    pub fn new(context: SweepContext, theorem: Theorem) -> Self {
        SweepSpec {
            context,
            theorem,
            min_size: if theorem == Theorem::Lemmas { 1 } else { 2 },
            max_size: context.universe_size(),
            normalize: !context.is_mod(),
            gap_mode: GapModeChoice::Both,
            counterexample_cap: DEFAULT_CE_CAP,
            budget: DEFAULT_BUDGET,
            workers: 0,
            checkpoint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.context {
            SweepContext::IntWindow { n } => {
                if n == 0 || n > MAX_INT_WINDOW {
                    return Err(Error::Precondition(format!(
                        "window must lie in [1, {MAX_INT_WINDOW}] (got {n})"
                    )));
                }
                if !self.theorem.allows_int() {
                    return Err(Error::Precondition(format!(
                        "theorem {} needs a mod-p universe",
                        self.theorem
                    )));
                }
            }
            SweepContext::ModP { p } => {
                if !is_prime(p) {
                    return Err(Error::NonPrimeModulus(p));
                }
                if p > MAX_SWEEP_PRIME {
                    return Err(Error::Precondition(format!(
                        "sweep moduli are capped at {MAX_SWEEP_PRIME} (got {p})"
                    )));
                }
                if !self.theorem.allows_mod() {
                    return Err(Error::Precondition(format!(
                        "theorem {} needs a Z window universe",
                        self.theorem
                    )));
                }
            }
        }
        if self.min_size == 0 {
            return Err(Error::Precondition("min size must be at least 1".into()));
        }
        // min_size > max_size is not an error: the sweep is simply empty
        // (e.g. a width-1 window has no 2-element subsets).
        Ok(())
    }

    /// The semantic fields that determine a report, used for the report echo
    /// and the checkpoint hash. Worker count and checkpoint path are
    /// deliberately excluded: they change scheduling, never results.
    pub(crate) fn echo(&self, mode: RunMode) -> SpecEcho {
        SpecEcho {
            context: self.context,
            theorem: self.theorem,
            min_size: self.min_size,
            max_size: self.max_size,
            normalize: self.normalize,
            gap_mode: self.gap_mode,
            counterexample_cap: self.counterexample_cap,
            budget: self.budget,
            mode,
        }
    }
}

/// Echo of the semantic sweep parameters inside a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub context: SweepContext,
    pub theorem: Theorem,
    pub min_size: u32,
    pub max_size: u32,
    pub normalize: bool,
    pub gap_mode: GapModeChoice,
    pub counterexample_cap: u64,
    pub budget: u64,
    pub mode: RunMode,
}

impl SpecEcho {
    pub fn sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        let canon = serde_json::to_string(self).expect("spec echo serializes");
        let mut h = Sha256::new();
        h.update(canon.as_bytes());
        let digest = h.finalize();
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Pair counters of a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Unordered pairs visited (closed form: k(k+1)/2 over admissible subsets).
    pub enumerated: u64,
    /// Pairs surviving translation normalization (equals `enumerated` when
    /// normalization is off).
    pub after_normalization: u64,
    /// Pairs satisfying the selector's hypotheses, on which both verdicts
    /// were computed.
    pub checked: u64,
    pub agreements: u64,
    /// Exact disagreement total; the report list is truncated at the cap.
    pub counterexamples: u64,
}

/// One recorded disagreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub oracle: String,
    pub predicted: String,
    /// |A+^B| for the pair.
    pub sumset_size: u64,
}

/// Agreement statistics restricted to the boundary band p < |A|+|B|, where
/// the characterization applies but the gap/standard-pair results do not.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandStats {
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: u64,
}

/// Gap data accumulated by T6 sweeps: asserted measurements for standard
/// first components, observational ones for any non-standard critical pair
/// (none are expected to exist).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSummary {
    pub standard_checked: u64,
    pub min_linear_gap: Option<u64>,
    pub min_cyclic_gap: Option<u64>,
    pub nonstandard_seen: u64,
    /// For non-standard first components: smallest over such pairs of the
    /// best (largest over all generators) cyclic gap in the second component.
    pub nonstandard_min_best_gap: Option<u64>,
}

/// Outcome of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub spec: SpecEcho,
    pub counts: Counts,
    pub counterexamples: Vec<Counterexample>,
    pub boundary_band: Option<BandStats>,
    pub gap_summary: Option<GapSummary>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Flatten the counterexample list as CSV (A, B, oracle, predicted,
    /// sumset_size).
    pub fn counterexamples_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["A", "B", "oracle", "predicted", "sumset_size"])
            .expect("csv write");
        for ce in &self.counterexamples {
            w.write_record([
                ce.a.as_str(),
                ce.b.as_str(),
                ce.oracle.as_str(),
                ce.predicted.as_str(),
                &ce.sumset_size.to_string(),
            ])
            .expect("csv write");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }
}

/// Run a sweep, treating every disagreement as a counterexample to the
/// selected theorem. The expected outcome for every selector is zero.
pub fn run_theorem_sweep(spec: &SweepSpec) -> Result<VerifyReport> {
    engine::run_to_completion(spec, RunMode::Assert, false)
}

/// Run a sweep in report-only mode: violations are recorded, never fatal.
/// Useful for mapping where the hypotheses are tight (the boundary band,
/// gap data for non-standard critical pairs).
pub fn search_counterexamples(spec: &SweepSpec) -> Result<VerifyReport> {
    engine::run_to_completion(spec, RunMode::Search, false)
}

/// Continue a sweep from the checkpoint recorded in `spec.checkpoint`.
/// The final report is identical to an uninterrupted run (timing aside).
pub fn resume(spec: &SweepSpec, mode: RunMode) -> Result<VerifyReport> {
    engine::run_to_completion(spec, mode, true)
}

/// Run at most `max_chunks` enumeration chunks, writing a checkpoint.
/// Exposed so interruption and resumption can be exercised deterministically.
pub fn run_sweep_partial(
    spec: &SweepSpec,
    mode: RunMode,
    resume: bool,
    max_chunks: Option<usize>,
) -> Result<SweepOutcome> {
    engine::run(spec, mode, resume, max_chunks)
}

/// Stream the unordered pairs a spec enumerates (size filters applied, one
/// representative per translation class when normalization is on).
pub fn enumerate_pairs(spec: &SweepSpec) -> Result<PairIter> {
    enumerate::pair_iter(spec)
}

//! Exponent profiles and gap analysis of mod-p sets.
//!
//! Every nonzero residue d additively generates Z/pZ, so a set X can be
//! rewritten in "base d": the exponent set {r in [0, p-1] : r*d mod p in X}.
//! A gap is a maximal run of exponents absent from X; runs may be measured
//! linearly over the window [0, p-1] or cyclically (wrapping p-1 -> 0).

use serde::{Deserialize, Serialize};

use crate::classify::ap_witnesses_mod;
use crate::error::{Error, Result};
use crate::primes::mul_mod;
use crate::set::ModSet;
use crate::sumset::{is_critical_pair_mod, same_modulus};

/// Whether gaps may wrap from exponent p-1 to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapMode {
    Linear,
    Cyclic,
}

impl std::fmt::Display for GapMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GapMode::Linear => write!(f, "linear"),
            GapMode::Cyclic => write!(f, "cyclic"),
        }
    }
}

impl std::str::FromStr for GapMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(GapMode::Linear),
            "cyclic" => Ok(GapMode::Cyclic),
            other => Err(Error::Parse(format!("unknown gap mode {other:?}"))),
        }
    }
}

/// Exponent representation of a set w.r.t. an additive generator d.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapProfile {
    #[serde(rename = "p")]
    pub modulus: u64,
    #[serde(rename = "d")]
    pub generator: u64,
    pub mode: GapMode,
    /// Sorted residues r with r*d mod p in X; |exponents| = |X|.
    pub exponents: Vec<u64>,
    /// Maximal runs of consecutive exponents, as inclusive [m, m-hat] pairs;
    /// consecutive blocks are separated by at least one absent exponent.
    pub blocks: Vec<(u64, u64)>,
    /// Length of the longest maximal run of absent exponents under `mode`
    /// (0 when X exhausts the group).
    pub longest_gap: u64,
}

/// The unique b in [1, p-1] with a*b = 1 (mod p). Extended Euclid, so this
/// does not assume primality beyond gcd(a, p) = 1.
pub fn mod_inverse(a: u64, p: u64) -> Result<u64> {
    if a == 0 || a.is_multiple_of(p) {
        return Err(Error::ZeroGenerator);
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::Precondition(format!("{a} is not invertible mod {p}")));
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// Exponent profile of X with respect to d in [1, p-1].
pub fn exponent_profile(x: &ModSet, d: u64, mode: GapMode) -> Result<GapProfile> {
    let p = x.modulus();
    if d == 0 {
        return Err(Error::ZeroGenerator);
    }
    if d >= p {
        return Err(Error::Precondition(format!("generator {d} not in [1, {}]", p - 1)));
    }
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let dinv = mod_inverse(d, p)?;
    let mut exponents: Vec<u64> = x.elements().iter().map(|&e| mul_mod(e, dinv, p)).collect();
    exponents.sort_unstable();

    let mut blocks = Vec::new();
    let mut start = exponents[0];
    let mut prev = exponents[0];
    for &e in &exponents[1..] {
        if e == prev + 1 {
            prev = e;
        } else {
            blocks.push((start, prev));
            start = e;
            prev = e;
        }
    }
    blocks.push((start, prev));

    let longest_gap = longest_gap_of_blocks(&blocks, p, mode);
    Ok(GapProfile {
        modulus: p,
        generator: d,
        mode,
        exponents,
        blocks,
        longest_gap,
    })
}

/// Maximal absent runs between/around the present blocks.
fn gap_intervals(blocks: &[(u64, u64)], p: u64) -> Vec<(u64, u64)> {
    let mut gaps = Vec::new();
    let mut cursor = 0u64;
    for &(lo, hi) in blocks {
        if lo > cursor {
            gaps.push((cursor, lo - 1));
        }
        cursor = hi + 1;
    }
    if cursor < p {
        gaps.push((cursor, p - 1));
    }
    gaps
}

fn longest_gap_of_blocks(blocks: &[(u64, u64)], p: u64, mode: GapMode) -> u64 {
    let gaps = gap_intervals(blocks, p);
    if gaps.is_empty() {
        return 0;
    }
    let len = |(lo, hi): (u64, u64)| hi - lo + 1;
    match mode {
        GapMode::Linear => gaps.iter().map(|&g| len(g)).max().unwrap_or(0),
        GapMode::Cyclic => {
            let first = gaps[0];
            let last = *gaps.last().unwrap();
            let mut best = 0;
            if gaps.len() >= 2 && first.0 == 0 && last.1 == p - 1 {
                best = len(first) + len(last);
                for &g in &gaps[1..gaps.len() - 1] {
                    best = best.max(len(g));
                }
            } else {
                for &g in &gaps {
                    best = best.max(len(g));
                }
            }
            best
        }
    }
}

/// Longest gap of X for every generator d in [1, p-1], in generator order.
pub fn longest_gap_over_generators(x: &ModSet, mode: GapMode) -> Result<Vec<(u64, u64)>> {
    let p = x.modulus();
    (1..p)
        .map(|d| Ok((d, exponent_profile(x, d, mode)?.longest_gap)))
        .collect()
}

/// Gap measurement for one standard-set witness of A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCheckEntry {
    pub d: u64,
    pub tau: u64,
    pub linear_gap: u64,
    pub cyclic_gap: u64,
}

/// Outcome of checking that B's longest gap w.r.t. A's progression
/// difference is at least |A|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCheckReport {
    pub modulus: u64,
    pub set_size_a: u64,
    pub set_size_b: u64,
    /// One entry per (difference, start) witnessing A as a standard set.
    pub entries: Vec<GapCheckEntry>,
    pub min_linear_gap: u64,
    pub min_cyclic_gap: u64,
    /// The required lower bound, |A|.
    pub required: u64,
    pub satisfied: bool,
}

/// For a critical pair (A, B) with |A| >= 5, p >= |A|+|B| and A a standard
/// set, measure the longest gap in B with respect to each difference d
/// witnessing A, after translating both sets so that A starts at 0. The
/// linear gap is taken over the exponent window [0, p-1] of the shifted B;
/// the cyclic gap is shift-independent. All witnesses are evaluated and the
/// minimum is reported, which is the strongest reading of the bound.
pub fn check_gap_theorem(a: &ModSet, b: &ModSet) -> Result<GapCheckReport> {
    let p = same_modulus(a, b)?;
    let (m, n) = (a.len() as u64, b.len() as u64);
    if m < 5 {
        return Err(Error::HypothesisViolation(format!("|A| >= 5 required (got {m})")));
    }
    if n < 2 {
        return Err(Error::HypothesisViolation(format!("|B| >= 2 required (got {n})")));
    }
    if p < m + n {
        return Err(Error::HypothesisViolation(format!(
            "p >= |A|+|B| required (p = {p}, |A|+|B| = {})",
            m + n
        )));
    }
    let witnesses = ap_witnesses_mod(a);
    if witnesses.is_empty() {
        return Err(Error::HypothesisViolation("A is not a standard set".into()));
    }
    if !is_critical_pair_mod(a, b)? {
        return Err(Error::HypothesisViolation("(A, B) is not a critical pair".into()));
    }

    let mut entries = Vec::with_capacity(witnesses.len());
    for (d, tau) in witnesses {
        let shifted_b = b.translate((p - tau % p) % p);
        let linear = exponent_profile(&shifted_b, d, GapMode::Linear)?.longest_gap;
        let cyclic = exponent_profile(&shifted_b, d, GapMode::Cyclic)?.longest_gap;
        entries.push(GapCheckEntry { d, tau, linear_gap: linear, cyclic_gap: cyclic });
    }
    let min_linear = entries.iter().map(|e| e.linear_gap).min().unwrap_or(0);
    let min_cyclic = entries.iter().map(|e| e.cyclic_gap).min().unwrap_or(0);
    Ok(GapCheckReport {
        modulus: p,
        set_size_a: m,
        set_size_b: n,
        entries,
        min_linear_gap: min_linear,
        min_cyclic_gap: min_cyclic,
        required: m,
        satisfied: min_linear >= m && min_cyclic >= m,
    })
}

//! The four subcommands: sumset, classify, gaps, verify.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use critpair_core::verify::{self, RunMode, SweepContext, SweepSpec, Theorem};
use critpair_core::{
    classify, gaps, parse_set_literal, sumset, GapMode, GroupContext, IntSet, ModSet,
    PairClassification, SetLiteral, VerifyReport,
};

use crate::config::{CliConfig, OutputFormat};

/// Exit code for a verify run: counterexamples mean 1 in assert mode;
/// search mode only reports.
pub fn verify_exit_code(mode: RunMode, total_counterexamples: u64) -> i32 {
    match mode {
        RunMode::Search => 0,
        RunMode::Assert => {
            if total_counterexamples > 0 {
                1
            } else {
                0
            }
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                lock.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv write");
    for row in rows {
        w.write_record(row).expect("csv write");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
}

/// Both operands lifted into one group context.
#[derive(Debug)]
enum PairOperands {
    Int(IntSet, IntSet),
    Mod(ModSet, ModSet),
}

/// Combine two set literals with an optional --mod flag. A modulus may come
/// from either literal or the flag; all mentions must agree.
fn resolve_pair(a: &str, b: &str, mod_flag: Option<u64>) -> Result<PairOperands> {
    let la = parse_set_literal(a)?;
    let lb = parse_set_literal(b)?;
    let mut modulus = mod_flag;
    for lit in [&la, &lb] {
        if let SetLiteral::Mod(s) = lit {
            match modulus {
                None => modulus = Some(s.modulus()),
                Some(p) if p == s.modulus() => {}
                Some(p) => bail!("conflicting moduli: {} vs {}", p, s.modulus()),
            }
        }
    }
    match modulus {
        None => {
            let (SetLiteral::Int(sa), SetLiteral::Int(sb)) = (la, lb) else {
                unreachable!("no modulus implies both literals are plain")
            };
            Ok(PairOperands::Int(sa, sb))
        }
        Some(p) => {
            // validate the modulus before touching elements, so `--mod 4`
            // reports non-primality rather than a residue problem
            GroupContext::mod_p(p)?;
            Ok(PairOperands::Mod(lift_mod(la, p)?, lift_mod(lb, p)?))
        }
    }
}

fn lift_mod(lit: SetLiteral, p: u64) -> Result<ModSet> {
    match lit {
        SetLiteral::Mod(s) => Ok(s),
        SetLiteral::Int(s) => {
            let elems = s
                .elements()
                .iter()
                .map(|&e| {
                    u64::try_from(e)
                        .map_err(|_| anyhow!("negative element {e} is not a residue mod {p}"))
                })
                .collect::<Result<Vec<u64>>>()?;
            Ok(ModSet::new(p, elems)?)
        }
    }
}

#[derive(Serialize)]
struct SumsetOutput {
    context: String,
    a: String,
    b: String,
    sumset: String,
    sumset_size: u64,
    restricted_sumset: String,
    restricted_size: u64,
    cd_bound: u64,
    eh_bound: u64,
    /// None when a side has fewer than 2 elements (criticality undefined).
    critical: Option<bool>,
}

pub fn cmd_sumset(
    a: &str,
    b: &str,
    mod_flag: Option<u64>,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<i32> {
    let output = match resolve_pair(a, b, mod_flag)? {
        PairOperands::Int(sa, sb) => {
            let plain = sumset::sumset(&sa, &sb)?;
            let restricted = sumset::restricted_sumset(&sa, &sb)?;
            let (m, n) = (sa.len() as u64, sb.len() as u64);
            SumsetOutput {
                context: "integers".into(),
                a: sa.to_string(),
                b: sb.to_string(),
                sumset_size: plain.len() as u64,
                sumset: plain.to_string(),
                restricted_size: restricted.len() as u64,
                restricted_sumset: restricted.to_string(),
                cd_bound: sumset::cd_lower_bound(m, n, GroupContext::Integers),
                eh_bound: sumset::eh_lower_bound(m, n, GroupContext::Integers),
                critical: (m >= 2 && n >= 2)
                    .then(|| restricted.len() as u64 == m + n - 3),
            }
        }
        PairOperands::Mod(sa, sb) => {
            let p = sa.modulus();
            let plain = sumset::sumset_mod(&sa, &sb)?;
            let restricted = sumset::restricted_sumset_mod(&sa, &sb)?;
            let (m, n) = (sa.len() as u64, sb.len() as u64);
            SumsetOutput {
                context: format!("mod {p}"),
                a: sa.to_string(),
                b: sb.to_string(),
                sumset_size: plain.len() as u64,
                sumset: plain.to_string(),
                restricted_size: restricted.len() as u64,
                restricted_sumset: restricted.to_string(),
                cd_bound: sumset::cd_lower_bound(m, n, GroupContext::ModP(p)),
                eh_bound: sumset::eh_lower_bound(m, n, GroupContext::ModP(p)),
                critical: (m >= 2 && n >= 2)
                    .then(|| restricted.len() as u64 == m + n - 3),
            }
        }
    };

    let rendered = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&output)?,
        OutputFormat::Csv => csv_document(
            &[
                "context", "a", "b", "sumset", "sumset_size", "restricted_sumset",
                "restricted_size", "cd_bound", "eh_bound", "critical",
            ],
            &[vec![
                output.context.clone(),
                output.a.clone(),
                output.b.clone(),
                output.sumset.clone(),
                output.sumset_size.to_string(),
                output.restricted_sumset.clone(),
                output.restricted_size.to_string(),
                output.cd_bound.to_string(),
                output.eh_bound.to_string(),
                render_opt_bool(output.critical),
            ]],
        ),
        OutputFormat::Text => format!(
            "context    = {}\n\
             A          = {}\n\
             B          = {}\n\
             A+B        = {}  (size {})\n\
             A+^B       = {}  (size {})\n\
             CD bound   = {}  (|A+B| >= bound)\n\
             EH bound   = {}  (|A+^B| >= bound)\n\
             critical   = {}",
            output.context,
            output.a,
            output.b,
            output.sumset,
            output.sumset_size,
            output.restricted_sumset,
            output.restricted_size,
            output.cd_bound,
            output.eh_bound,
            render_opt_bool(output.critical),
        ),
    };
    emit(out, &rendered)?;
    Ok(0)
}

fn render_opt_bool(v: Option<bool>) -> String {
    match v {
        Some(true) => "yes".into(),
        Some(false) => "no".into(),
        None => "n/a (needs |A|, |B| >= 2)".into(),
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    context: String,
    a: String,
    b: String,
    #[serde(flatten)]
    classification: PairClassification,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
struct OracleCheck {
    critical: bool,
    restricted_size: u64,
    agrees: bool,
}

pub fn cmd_classify(
    a: &str,
    b: &str,
    mod_flag: Option<u64>,
    check: bool,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<i32> {
    let output = match resolve_pair(a, b, mod_flag)? {
        PairOperands::Int(sa, sb) => {
            let classification = classify::predict_critical(&sa, &sb)?;
            let oracle = if check {
                let r = sumset::restricted_sumset(&sa, &sb)?;
                let critical = r.len() as u64 == (sa.len() + sb.len()) as u64 - 3;
                Some(OracleCheck {
                    critical,
                    restricted_size: r.len() as u64,
                    agrees: critical == classification.critical,
                })
            } else {
                None
            };
            ClassifyOutput {
                context: "integers".into(),
                a: sa.to_string(),
                b: sb.to_string(),
                classification,
                oracle,
            }
        }
        PairOperands::Mod(sa, sb) => {
            let classification = classify::predict_critical_mod(&sa, &sb)?;
            let oracle = if check {
                let r = sumset::restricted_sumset_mod(&sa, &sb)?;
                let critical = r.len() as u64 == (sa.len() + sb.len()) as u64 - 3;
                Some(OracleCheck {
                    critical,
                    restricted_size: r.len() as u64,
                    agrees: critical == classification.critical,
                })
            } else {
                None
            };
            ClassifyOutput {
                context: format!("mod {}", sa.modulus()),
                a: sa.to_string(),
                b: sb.to_string(),
                classification,
                oracle,
            }
        }
    };

    let case = format!("{:?}", output.classification.case_tag);
    let witness = match &output.classification.witness {
        None => "-".to_string(),
        Some(critpair_core::Witness::Ap(w)) => {
            format!("progression start={} diff={} len={}", w.start, w.diff, w.len)
        }
        Some(critpair_core::Witness::BiPair(w)) => {
            format!("bi-pair a={} c={} d={}", w.a, w.c, w.d)
        }
    };
    let rendered = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&output)?,
        OutputFormat::Csv => csv_document(
            &["context", "a", "b", "critical", "case_tag", "witness"],
            &[vec![
                output.context.clone(),
                output.a.clone(),
                output.b.clone(),
                output.classification.critical.to_string(),
                case.clone(),
                witness.clone(),
            ]],
        ),
        OutputFormat::Text => {
            let mut text = format!(
                "context    = {}\n\
                 pair       = ({}, {})\n\
                 critical   = {}\n\
                 case       = {}\n\
                 witness    = {}",
                output.context,
                output.a,
                output.b,
                if output.classification.critical { "yes" } else { "no" },
                case,
                witness,
            );
            if let Some(oracle) = &output.oracle {
                text.push_str(&format!(
                    "\noracle     = {} (|A+^B| = {}): {}",
                    if oracle.critical { "critical" } else { "not critical" },
                    oracle.restricted_size,
                    if oracle.agrees { "agrees" } else { "DISAGREES" },
                ));
            }
            text
        }
    };
    emit(out, &rendered)?;
    Ok(0)
}

pub fn cmd_gaps(
    set: &str,
    generator: Option<u64>,
    mode: GapMode,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<i32> {
    let SetLiteral::Mod(x) = parse_set_literal(set)? else {
        bail!("gap profiles need a mod-p set literal, e.g. \"mod 11: {{0,1,2}}\"");
    };
    let profiles = match generator {
        Some(d) => vec![gaps::exponent_profile(&x, d, mode)?],
        None => (1..x.modulus())
            .map(|d| gaps::exponent_profile(&x, d, mode))
            .collect::<critpair_core::Result<Vec<_>>>()?,
    };

    let rendered = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&profiles)?,
        OutputFormat::Csv => csv_document(
            &["p", "d", "mode", "exponents", "blocks", "longest_gap"],
            &profiles
                .iter()
                .map(|prof| {
                    vec![
                        prof.modulus.to_string(),
                        prof.generator.to_string(),
                        prof.mode.to_string(),
                        join_u64(&prof.exponents),
                        render_blocks(&prof.blocks),
                        prof.longest_gap.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        OutputFormat::Text => {
            let mut text = format!("set        = {x}\nmode       = {mode}\n");
            text.push_str(&format!(
                "{:>4}  {:>11}  {:<20} {}\n",
                "d", "longest_gap", "exponents", "blocks"
            ));
            for prof in &profiles {
                text.push_str(&format!(
                    "{:>4}  {:>11}  {:<20} {}\n",
                    prof.generator,
                    prof.longest_gap,
                    format!("{{{}}}", join_u64(&prof.exponents)),
                    render_blocks(&prof.blocks),
                ));
            }
            text.pop();
            text
        }
    };
    emit(out, &rendered)?;
    Ok(0)
}

fn join_u64(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn render_blocks(blocks: &[(u64, u64)]) -> String {
    blocks
        .iter()
        .map(|(lo, hi)| format!("[{lo}-{hi}]"))
        .collect::<Vec<_>>()
        .join(" ")
}

#[allow(clippy::too_many_arguments)]
pub struct VerifyArgs {
    pub theorem: String,
    pub window: Option<u32>,
    pub modulus: Option<u64>,
    pub min_size: Option<u32>,
    pub max_size: Option<u32>,
    pub normalize: Option<bool>,
    pub gap_mode: String,
    pub cap: Option<u64>,
    pub budget: Option<u64>,
    pub checkpoint: Option<PathBuf>,
    pub resume: Option<PathBuf>,
    pub search: bool,
}

pub fn cmd_verify(
    args: VerifyArgs,
    config: &CliConfig,
    workers: Option<usize>,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<i32> {
    let theorem: Theorem = args.theorem.parse()?;
    let mode = if args.search { RunMode::Search } else { RunMode::Assert };

    let contexts: Vec<SweepContext> = match (args.window, args.modulus) {
        (Some(_), Some(_)) => bail!("--window and --mod are mutually exclusive"),
        (Some(n), None) => vec![SweepContext::IntWindow { n }],
        (None, Some(p)) => vec![SweepContext::ModP { p }],
        (None, None) => {
            if theorem.allows_int() {
                vec![SweepContext::IntWindow { n: config.window }]
            } else {
                // mod-only selector without --mod: run the configured primes
                config.primes.iter().map(|&p| SweepContext::ModP { p }).collect()
            }
        }
    };
    if args.resume.is_some() && args.checkpoint.is_some() {
        bail!("--resume already names the checkpoint; --checkpoint conflicts with it");
    }
    if args.resume.is_some() && contexts.len() > 1 {
        bail!("--resume needs a single universe (pass --mod or --window)");
    }

    let gap_mode = match args.gap_mode.to_ascii_lowercase().as_str() {
        "linear" => verify::GapModeChoice::Linear,
        "cyclic" => verify::GapModeChoice::Cyclic,
        "both" => verify::GapModeChoice::Both,
        other => bail!("unknown gap mode {other:?} (expected linear, cyclic or both)"),
    };

    let mut reports: Vec<VerifyReport> = Vec::with_capacity(contexts.len());
    for context in contexts {
        let mut spec = SweepSpec::new(context, theorem);
        if let Some(min) = args.min_size {
            spec.min_size = min;
        }
        if let Some(max) = args.max_size {
            spec.max_size = max;
        }
        if let Some(n) = args.normalize {
            spec.normalize = n;
        }
        spec.gap_mode = gap_mode;
        spec.counterexample_cap = args.cap.unwrap_or(config.counterexample_cap);
        if let Some(budget) = args.budget {
            spec.budget = budget;
        }
        spec.workers = workers.unwrap_or(config.workers);
        spec.checkpoint = args
            .checkpoint
            .as_deref()
            .or(args.resume.as_deref())
            .map(|p| config.resolve_checkpoint(p));

        let report = if args.resume.is_some() {
            verify::resume(&spec, mode)?
        } else if args.search {
            verify::search_counterexamples(&spec)?
        } else {
            verify::run_theorem_sweep(&spec)?
        };
        reports.push(report);
    }

    let rendered = match format {
        OutputFormat::Json => {
            if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string_pretty(&reports)?
            }
        }
        OutputFormat::Csv => {
            let mut doc = String::new();
            for (i, report) in reports.iter().enumerate() {
                let csv = report.counterexamples_csv();
                if i == 0 {
                    doc.push_str(&csv);
                } else if let Some((_, body)) = csv.split_once('\n') {
                    doc.push_str(body);
                }
            }
            doc
        }
        OutputFormat::Text => reports
            .iter()
            .map(render_report)
            .collect::<Vec<_>>()
            .join("\n\n"),
    };
    emit(out, &rendered)?;

    let total_ce: u64 = reports.iter().map(|r| r.counts.counterexamples).sum();
    Ok(verify_exit_code(mode, total_ce))
}

fn render_report(report: &VerifyReport) -> String {
    let mut text = format!(
        "theorem    = {}\n\
         context    = {}\n\
         mode       = {}\n\
         pairs      = {} enumerated, {} after normalization, {} checked\n\
         agreement  = {} agree, {} disagree",
        report.spec.theorem,
        report.spec.context,
        match report.spec.mode {
            RunMode::Assert => "assert",
            RunMode::Search => "search",
        },
        report.counts.enumerated,
        report.counts.after_normalization,
        report.counts.checked,
        report.counts.agreements,
        report.counts.counterexamples,
    );
    if let Some(band) = &report.boundary_band {
        text.push_str(&format!(
            "\nband p<|A|+|B| = {} checked, {} agree, {} disagree",
            band.checked, band.agreements, band.disagreements
        ));
    }
    if let Some(gap) = &report.gap_summary {
        text.push_str(&format!(
            "\ngaps       = {} standard checked (min linear {}, min cyclic {}), {} non-standard seen",
            gap.standard_checked,
            render_opt_u64(gap.min_linear_gap),
            render_opt_u64(gap.min_cyclic_gap),
            gap.nonstandard_seen,
        ));
    }
    for ce in &report.counterexamples {
        text.push_str(&format!(
            "\ncounterexample: A={} B={} oracle[{}] predicted[{}] |A+^B|={}",
            ce.a, ce.b, ce.oracle, ce.predicted, ce.sumset_size
        ));
    }
    let shown = report.counterexamples.len() as u64;
    if report.counts.counterexamples > shown {
        text.push_str(&format!(
            "\n({} more counterexamples beyond the cap)",
            report.counts.counterexamples - shown
        ));
    }
    text.push_str(&format!("\nelapsed    = {} ms", report.elapsed_ms));
    text.push_str(&format!(
        "\nresult: {}",
        if report.counts.counterexamples == 0 {
            "PASS (0 counterexamples)".to_string()
        } else {
            format!("FAIL ({} counterexamples)", report.counts.counterexamples)
        }
    ));
    text
}

fn render_opt_u64(v: Option<u64>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

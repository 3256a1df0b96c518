//! critpair: restricted sumsets, critical pairs and exhaustive sweeps over
//! Z and Z/pZ.
//!
//! Exit codes: 0 clean, 1 a sweep found counterexamples, 2 usage, parse or
//! hypothesis errors.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::VerifyArgs;
use config::{CliConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "critpair",
    version,
    about = "Restricted sumsets, critical-pair classification, gap profiles and verification sweeps"
)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Flat key = value config file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Sweep worker threads (0 = one per core)
    #[arg(long, global = true, value_name = "K")]
    workers: Option<usize>,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute A+B and A+^B, their sizes, the Cauchy-Davenport and
    /// Erdos-Heilbronn lower bounds, and whether the pair is critical
    Sumset {
        /// Set literal, e.g. "{0,1,5}" or "mod 13: {0,1,5}"
        a: String,
        /// Second set literal
        b: String,
        /// Work mod p (p prime); plain literals become residue sets
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
    },
    /// Structural criticality verdict with witnesses, no sumset evaluated
    Classify {
        a: String,
        b: String,
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
        /// Also run the brute-force oracle and report agreement
        #[arg(long)]
        check: bool,
    },
    /// Exponent profile and gap lengths of a mod-p set
    Gaps {
        /// Mod-p set literal, e.g. "mod 11: {0,1,2,3,4}"
        set: String,
        /// Profile a single generator d (all generators when omitted)
        #[arg(long, value_name = "D")]
        gen: Option<u64>,
        /// linear gaps stop at the window edges; cyclic gaps wrap
        #[arg(long, default_value = "linear")]
        mode: String,
    },
    /// Sweep every pair in a universe, comparing oracle and predictor
    Verify {
        /// T1 | T2 | T3 | T4 | T5 | T6 | T7 | KAROLYI | LEMMAS
        #[arg(long, value_name = "SEL")]
        theorem: String,
        /// Z window {0..N-1}
        #[arg(long, value_name = "N")]
        window: Option<u32>,
        /// Z/pZ universe
        #[arg(long = "mod", value_name = "P")]
        modulus: Option<u64>,
        /// Smallest subset size enumerated
        #[arg(long, value_name = "K")]
        min_size: Option<u32>,
        /// Largest subset size enumerated
        #[arg(long, value_name = "K")]
        max_size: Option<u32>,
        /// Keep one representative per joint-translation class
        #[arg(long, value_name = "BOOL")]
        normalize: Option<bool>,
        /// Gap modes measured by T6: linear | cyclic | both
        #[arg(long, default_value = "both", value_name = "MODE")]
        gap_mode: String,
        /// Cap on counterexamples kept in the report
        #[arg(long, value_name = "K")]
        cap: Option<u64>,
        /// Maximum estimated pair count accepted
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
        /// Write resumable progress to this checkpoint file
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        /// Resume from (and keep writing) this checkpoint file
        #[arg(long, value_name = "PATH")]
        resume: Option<PathBuf>,
        /// Record violations without failing (exit 0 either way)
        #[arg(long)]
        search: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    let format = if cli.json { OutputFormat::Json } else { config.format };
    let out = cli.out.as_deref();

    match cli.command {
        Command::Sumset { a, b, modulus } => commands::cmd_sumset(&a, &b, modulus, format, out),
        Command::Classify { a, b, modulus, check } => {
            commands::cmd_classify(&a, &b, modulus, check, format, out)
        }
        Command::Gaps { set, gen, mode } => {
            commands::cmd_gaps(&set, gen, mode.parse()?, format, out)
        }
        Command::Verify {
            theorem,
            window,
            modulus,
            min_size,
            max_size,
            normalize,
            gap_mode,
            cap,
            budget,
            checkpoint,
            resume,
            search,
        } => commands::cmd_verify(
            VerifyArgs {
                theorem,
                window,
                modulus,
                min_size,
                max_size,
                normalize,
                gap_mode,
                cap,
                budget,
                checkpoint,
                resume,
                search,
            },
            &config,
            cli.workers,
            format,
            out,
        ),
    }
}

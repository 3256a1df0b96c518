//! Flat key-value configuration file.
//!
//! Lines are `key = value`; blank lines and `#` comments are ignored.
//! Recognized keys: `window`, `primes` (comma-separated), `workers`,
//! `format` (text | json | csv), `checkpoint_dir`, `counterexample_cap`.
//! CLI flags override file values, which override the built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => bail!("unknown output format {other:?} (expected text, json or csv)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Default Z window for verify sweeps.
    pub window: u32,
    /// Primes used when a mod-p sweep is run without an explicit --mod.
    pub primes: Vec<u64>,
    /// Sweep worker threads; 0 means one per core.
    pub workers: usize,
    pub format: OutputFormat,
    /// Directory for bare checkpoint file names.
    pub checkpoint_dir: PathBuf,
    pub counterexample_cap: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            window: 10,
            primes: vec![5, 7, 11, 13],
            workers: 0,
            format: OutputFormat::Text,
            checkpoint_dir: PathBuf::from("."),
            counterexample_cap: 100,
        }
    }
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut cfg = CliConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected `key = value`", path.display(), lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let field = || format!("{}:{}: invalid {key}", path.display(), lineno + 1);
            match key {
                "window" => cfg.window = value.parse().with_context(field)?,
                "primes" => {
                    cfg.primes = value
                        .split(',')
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .with_context(field)?;
                    if cfg.primes.is_empty() {
                        bail!("{}: prime list is empty", field());
                    }
                }
                "workers" => cfg.workers = value.parse().with_context(field)?,
                "format" => cfg.format = value.parse().with_context(field)?,
                "checkpoint_dir" => cfg.checkpoint_dir = PathBuf::from(value),
                "counterexample_cap" => cfg.counterexample_cap = value.parse().with_context(field)?,
                other => bail!("{}:{}: unknown key {other:?}", path.display(), lineno + 1),
            }
        }
        Ok(cfg)
    }

    /// Bare file names land in `checkpoint_dir`; paths with a directory
    /// component are used as given.
    pub fn resolve_checkpoint(&self, path: &Path) -> PathBuf {
        if path.components().count() == 1 && path.is_relative() {
            self.checkpoint_dir.join(path)
        } else {
            path.to_path_buf()
        }
    }
}

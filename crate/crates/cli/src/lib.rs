//! Batch front-end: JSON scenario in, JSON and CSV reports out.
//!
//! Exit codes: 0 ok, 1 usage or config error, 2 a required condition
//! failed, 3 the scattering extractions disagree, 4 an identity residual
//! exceeds its threshold.

pub mod commands;
pub mod config;
mod table;

use clap::{Parser, Subcommand};
use config::ScenarioConfig;
use std::fmt;
use std::path::{Path, PathBuf};

pub use table::REPORT_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONDITION: i32 = 2;
pub const EXIT_EXTRACTION: i32 = 3;
pub const EXIT_RESIDUAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "wavebound", version, about = "Submerged-body water waves: conditions, solves and bound validation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Geometric conditions, largest ε and the small-frequency criterion.
    CheckGeometry,
    /// Solve, extract d± and evaluate probes.
    Solve,
    /// Norms, identity residuals and the bound, one row per sweep point.
    Validate,
    /// The Green's function on a grid.
    GreenDump,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::CheckGeometry => "check-geometry",
            Self::Solve => "solve",
            Self::Validate => "validate",
            Self::GreenDump => "green-dump",
        }
    }
}

/// A failure that ends the run with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<wavebound::Error> for UsageError {
    fn from(e: wavebound::Error) -> Self {
        Self(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        Self(format!("i/o: {e}"))
    }
}

/// What a command produced: report files and an exit code, with
/// diagnostics for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    pub messages: Vec<String>,
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    ScenarioConfig::parse(&text).map_err(|e| UsageError(format!("{}: schema violation: {e}", path.display())))
}

/// Parse, validate and run.  Everything up to the first computation is
/// checked before any output is written.
pub fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| UsageError("--config is required".into()))?;
    let mut cfg = load_config(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.check(cli.command != Command::GreenDump)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| UsageError(format!("thread pool: {e}")))?;
    std::fs::create_dir_all(&cli.out)?;
    pool.install(|| match cli.command {
        Command::CheckGeometry => commands::check_geometry(&cfg, &cli.out),
        Command::Solve => commands::solve(&cfg, &cli.out),
        Command::Validate => commands::validate(&cfg, &cli.out),
        Command::GreenDump => commands::green_dump(&cfg, &cli.out),
    })
}

/// The binary's entry point after argument parsing.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(o) => {
            for m in &o.messages {
                eprintln!("{m}");
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

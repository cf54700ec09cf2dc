//! `zvar`: batch front end for the zero-statistics library.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;
use zvar_core::Error as CoreError;

use config::{CommonArgs, THREADS_ENV};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("numerical: {0}")]
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Domain(_) => CliError::Usage(msg),
            CoreError::Quadrature { .. }
            | CoreError::Gap { .. }
            | CoreError::NearZero { .. }
            | CoreError::NoSeparatedPoint { .. }
            | CoreError::Normalization(_) => CliError::Numerical(msg),
            _ => CliError::Data(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "zvar", version, about = "Pair correlation and variance statistics of zeta zeros")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a zero file and print its count, height and checksum.
    Ingest {
        path: PathBuf,
        /// Fail unless the file holds exactly this many ordinates.
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Empirical F_Δ(α, T) on an α grid, with the asymptotic comparisons.
    Fstat(CommonArgs),
    /// Empirical number variance and S(t) variance (optionally log|ζ| moments).
    Variance(CommonArgs),
    /// Variance predictions with their term breakdowns.
    Predict(CommonArgs),
    /// Empirical variance against every prediction.
    Compare(CommonArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = std::env::var_os(THREADS_ENV) {
        let n: usize = n
            .to_str()
            .and_then(|s| s.parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let (report, cfg) = match cli.command {
        Command::Ingest { path, expect } => return commands::ingest(&path, expect),
        Command::Fstat(a) => {
            let cfg = a.resolve("0", "0:1:0.1")?;
            (commands::fstat(&cfg)?, cfg)
        }
        Command::Variance(a) => {
            let cfg = a.resolve("0.5,1,2", "0")?;
            (commands::variance(&cfg)?, cfg)
        }
        Command::Predict(a) => {
            let cfg = a.resolve("0.5,1,2", "0")?;
            (commands::predict(&cfg)?, cfg)
        }
        Command::Compare(a) => {
            let cfg = a.resolve("0.5,1,2", "0")?;
            (commands::compare_cmd(&cfg)?, cfg)
        }
    };
    report.emit(cfg.format, cfg.output_dir.as_ref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zvar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

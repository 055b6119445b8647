//! `gennorm`: command-line access to the generalized normal Fisher
//! information library.
//!
//! Exit codes: 0 success, 1 failed verification or failed numerical
//! computation, 2 usage or input error.

mod commands;
mod record;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::record::Format;

#[derive(Debug, Parser)]
#[command(
    name = "gennorm",
    version,
    about = "Generalized normal distribution and its Fisher information"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scale parameter θ > 0.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 1.0)]
    pub theta: f64,
    /// Shape parameter β > 0.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 2.0)]
    pub beta: f64,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    /// Relative tolerance for adaptive quadrature.
    #[arg(long, global = true, allow_negative_numbers = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output format (tables default to csv, records to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate pdf and log-pdf on a grid.
    Pdf(commands::PdfArgs),
    /// Fisher information about θ by one or more methods.
    Fisher(commands::FisherArgs),
    /// Exact moments E[X^k].
    Moments(commands::MomentsArgs),
    /// Maximum-likelihood θ from a sample file or a generated sample.
    Estimate(commands::EstimateArgs),
    /// Run a battery of numerical checks.
    Verify(commands::VerifyArgs),
}

/// Bad invocation that clap cannot catch on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<gennorm::Error>() {
        Some(gennorm::Error::NonConvergence { .. } | gennorm::Error::Numerical(_)) => 1,
        _ => 2,
    }
}

fn emit(common: &Common, text: &str) -> anyhow::Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Pdf(args) => commands::pdf(&cli.common, args),
        Command::Fisher(args) => commands::fisher(&cli.common, args),
        Command::Moments(args) => commands::moments(&cli.common, args),
        Command::Estimate(args) => commands::estimate(&cli.common, args),
        Command::Verify(args) => commands::verify(&cli.common, args),
    };
    match result.and_then(|out| emit(&cli.common, &out.text).map(|_| out.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

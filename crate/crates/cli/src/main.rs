//! `divlab`: experiments on the diversity of number fields in fibers of a
//! cover. Results go to stdout and to CSV files under `--out`.
//!
//! Exit codes: 0 success, 1 configuration error, 2 degenerate input,
//! 3 invariant violation.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use divlab::Error;
use thiserror::Error;

use config::{Opts, RunConfig};

#[derive(Parser)]
#[command(name = "divlab", version, about = "Number-field diversity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical polynomial, P_F and the density floor
    Analyze(Opts),
    /// Enumerate M_F(x) into mf.csv
    Sieve(Opts),
    /// Witnesses, greedy statistics and cliques
    Witness(Opts),
    /// Census of distinct fiber fields
    Diversity(Opts),
    /// Randomized and sweep verification suites
    Verify(Opts),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Violation(_) => 3,
            CliError::Core(e) => match e {
                Error::Parse { .. } | Error::Params(_) | Error::Precondition(_) => 1,
                Error::InvalidCover(_)
                | Error::NoCriticalValue
                | Error::NotSeparable
                | Error::NoRoot { .. }
                | Error::Domain(_)
                | Error::DegenerateFiber { .. } => 2,
                Error::LemmaViolation { .. } | Error::Invariant(_) => 3,
            },
        }
    }
}

type Handler = fn(&RunConfig) -> Result<(), CliError>;

fn run(command: Command) -> Result<(), CliError> {
    let env_workers = std::env::var("DIVLAB_WORKERS").ok();
    let (opts, cmd): (Opts, Handler) = match command {
        Command::Analyze(o) => (o, commands::analyze),
        Command::Sieve(o) => (o, commands::sieve),
        Command::Witness(o) => (o, commands::witness),
        Command::Diversity(o) => (o, commands::diversity),
        Command::Verify(o) => (o, commands::verify),
    };
    let config = RunConfig::resolve(opts, env_workers)?;
    cmd(&config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("divlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

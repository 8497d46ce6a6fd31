//! `fockbench` command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or parameter error,
//! 3 verification failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use fockbench::Error;

use crate::args::{Cli, Command};

pub const THREADS_ENV: &str = "FOCKBENCH_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
    Io(std::io::Error),
    Failed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(e) if is_parameter_error(e) => 2,
            CliError::Library(_) | CliError::Io(_) => 1,
            CliError::Failed => 3,
        }
    }
}

fn is_parameter_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter(_)
            | Error::Domain(_)
            | Error::CutoffTooSmall { .. }
            | Error::ShellAbsent(_)
            | Error::ZeroMassShell
            | Error::Unknown(_)
            | Error::BasisTooLarge { .. }
            | Error::EmptyBasis
    )
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Failed => write!(f, "verification failed"),
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            fockbench::exec::init_thread_pool(n);
            Ok(())
        }
        _ => Err(CliError::Usage(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command.with_config(cli.config.as_deref())? {
        Command::State(a) => commands::state(a),
        Command::Verify(a) => commands::verify(a),
        Command::Simulate(a) => commands::simulate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}

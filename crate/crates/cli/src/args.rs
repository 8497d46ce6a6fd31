//! Command-line flags and the optional TOML config that mirrors them.
//!
//! A config file holds the same keys as the long flags, flat at the top
//! level (`eta2 = [0.5]`, `M = 1`, `seed = 7`). Flags given on the command
//! line win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockbench::suites::Suite;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "fockbench",
    version,
    about = "Coherent-state families over truncated Fock spaces"
)]
pub struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a state; emit its amplitudes and number distribution.
    State(StateArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Waiting-time Monte Carlo against the negative binomial law.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Coherent,
    #[value(alias = "bs")]
    #[serde(alias = "bs")]
    Binomial,
    #[value(alias = "nb")]
    #[serde(alias = "nb")]
    Nbs,
    Ms,
    Nms,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Coherent amplitude squared.
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Squared moduli η_j², comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub eta2: Option<Vec<f64>>,
    /// Representation label (positive; integer for binomial and ms).
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    /// Phases θ_j, comma separated; zero by default.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,
    /// Replace the automatic cutoff value.
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Directory receiving state.json and the distribution table.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct VerifyArgs {
    pub suite: Option<Suite>,
    /// Rank of the resolution check (measure suite).
    #[arg(long)]
    pub r: Option<usize>,
    /// Shell total of the resolution check (measure suite).
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<u32>,
    /// Quadrature nodes per real dimension (measure suite).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Permit resolution checks with r ≥ 3.
    #[arg(long)]
    pub allow_high_rank: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SimulateArgs {
    /// Failure probability η² of each trial (a single value).
    #[arg(long, value_delimiter = ',')]
    pub eta2: Option<Vec<f64>>,
    /// Successes to wait for.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest failure count tabulated.
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! prefer_flags {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        Self {
            $($field: $flags.$field.or($file.$field),)*
        }
    };
}

impl StateArgs {
    fn merge(self, file: Self) -> Self {
        prefer_flags!(self, file; family, alpha2, eta2, m, theta, cutoff, tail_tol, out_dir, format)
    }
}

impl VerifyArgs {
    fn merge(self, file: Self) -> Self {
        Self {
            suite: self.suite.or(file.suite),
            r: self.r.or(file.r),
            m: self.m.or(file.m),
            nodes: self.nodes.or(file.nodes),
            allow_high_rank: self.allow_high_rank || file.allow_high_rank,
            out: self.out.or(file.out),
        }
    }
}

impl SimulateArgs {
    fn merge(self, file: Self) -> Self {
        prefer_flags!(self, file; eta2, m, trials, seed, n_max, out, format)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "family",
    "alpha2",
    "eta2",
    "M",
    "theta",
    "cutoff",
    "tail-tol",
    "out-dir",
    "format",
    "suite",
    "r",
    "nodes",
    "allow-high-rank",
    "out",
    "trials",
    "seed",
    "n-max",
];

fn load_table(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    if let Some(k) = table.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(CliError::Usage(format!(
            "config {}: unknown key {k}",
            path.display()
        )));
    }
    Ok(table)
}

fn from_table<T: for<'de> Deserialize<'de>>(table: toml::Table) -> Result<T, CliError> {
    // Keys of the other commands are ignored here.
    toml::Value::Table(table)
        .try_into()
        .map_err(|e| CliError::Usage(format!("config: {e}")))
}

impl Command {
    /// Fill unset flags from the config file.
    pub fn with_config(self, path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(self);
        };
        let table = load_table(path)?;
        Ok(match self {
            Command::State(a) => Command::State(a.merge(from_table(table)?)),
            Command::Verify(a) => Command::Verify(a.merge(from_table(table)?)),
            Command::Simulate(a) => Command::Simulate(a.merge(from_table(table)?)),
        })
    }
}

//! Experiments behind the `polyuct` binary.
//!
//! Every subcommand returns its full output as a [`Report`]; the binary
//! writes it to `--out` or stdout. Runs are deterministic in `(seed, config)`.

pub mod concentration;
pub mod config;
pub mod constants_cmd;
pub mod curves;
pub mod envs;
pub mod oracle;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{AlphaChoice, EnvName, FileConfig};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    MissingFixture(String),
    #[error("{0}")]
    Run(String),
}

/// Output text plus whether it carries error diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub has_errors: bool,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            has_errors: false,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyuct", version, about = "Polynomial UCT experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; trial k uses a seed derived from (seed, k).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of seeded trials per grid point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags take precedence over its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EnvArgs {
    #[arg(long, value_enum)]
    pub env: Option<EnvName>,
    /// Plain-text FrozenLake map, one row per line over S/F/H/G.
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub chain_length: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Comma-separated simulation counts.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Option<Vec<u64>>,
    /// Simulation horizon; defaults to the environment's step limit.
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean discounted episode return against simulations per step (CSV).
    ReturnCurve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        env: EnvArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Regret of the optimal root action against simulations (CSV).
    RegretCurve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        env: EnvArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Value-iteration fixture written by `oracle`.
        #[arg(long)]
        fixture: Option<PathBuf>,
        /// Root state of every search; defaults to the cell left of the goal.
        #[arg(long)]
        state: Option<usize>,
    },
    /// Concentration constants for one layer (JSON).
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        reward_bound: Option<f64>,
        /// Comma-separated successor counts K_1..K_K.
        #[arg(long, value_delimiter = ',')]
        branching: Option<Vec<usize>>,
        #[arg(long)]
        delta_min: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        /// A number or `auto`.
        #[arg(long)]
        alpha: Option<AlphaChoice>,
        #[arg(long)]
        scan_cap: Option<u64>,
    },
    /// Empirical tail frequencies against the theorem and lemma bounds (CSV).
    Concentration {
        #[command(flatten)]
        common: Common,
        /// Bandit instance JSON; a built-in two-arm instance when absent.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        z_grid: Option<Vec<f64>>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        scan_cap: Option<u64>,
        #[arg(long)]
        hoeffding_p: Option<f64>,
        #[arg(long)]
        hoeffding_n: Option<u64>,
        #[arg(long)]
        hoeffding_trials: Option<u64>,
    },
    /// Value-iteration fixture with V* and Q* per state (JSON).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        env: EnvArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::ReturnCurve { common, .. }
            | Command::RegretCurve { common, .. }
            | Command::Constants { common, .. }
            | Command::Concentration { common, .. }
            | Command::Oracle { common, .. } => common,
        }
    }
}

/// Runs one subcommand and returns its output and target path.
pub fn run(command: &Command) -> Result<(Report, Option<PathBuf>), CliError> {
    let common = command.common();
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out = common.out.clone().or_else(|| file.out.clone());
    let report = match command {
        Command::ReturnCurve { common, env, search } => curves::return_curve(common, env, search, &file)?,
        Command::RegretCurve {
            common,
            env,
            search,
            fixture,
            state,
        } => curves::regret_curve(common, env, search, fixture.clone(), *state, &file)?,
        Command::Constants {
            reward_bound,
            branching,
            delta_min,
            beta,
            xi,
            eta,
            alpha,
            scan_cap,
            ..
        } => constants_cmd::constants(constants_cmd::ConstantsInput::resolve(
            *reward_bound,
            branching.clone(),
            *delta_min,
            *beta,
            *xi,
            *eta,
            *alpha,
            *scan_cap,
            &file,
        ))?,
        Command::Concentration {
            common,
            instance,
            n_grid,
            z_grid,
            alpha,
            xi,
            eta,
            scan_cap,
            hoeffding_p,
            hoeffding_n,
            hoeffding_trials,
        } => concentration::concentration(concentration::ConcentrationInput::resolve(
            common,
            instance.clone(),
            n_grid.clone(),
            z_grid.clone(),
            *alpha,
            *xi,
            *eta,
            *scan_cap,
            *hoeffding_p,
            *hoeffding_n,
            *hoeffding_trials,
            &file,
        )?)?,
        Command::Oracle { env, tol, .. } => oracle::oracle(env, *tol, &file)?,
    };
    Ok((report, out))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// A float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One CSV line from already formatted fields.
pub fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}

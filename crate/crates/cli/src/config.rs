//! JSON configuration file and its merge with command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment selector shared by the planning subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EnvName {
    FrozenLake,
    Chain,
}

impl fmt::Display for EnvName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvName::FrozenLake => "frozen-lake",
            EnvName::Chain => "chain",
        })
    }
}

/// `α` given explicitly or picked from the admissible range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    Value(f64),
    Auto,
}

impl std::str::FromStr for AlphaChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(AlphaChoice::Auto);
        }
        s.parse::<f64>()
            .map(AlphaChoice::Value)
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
    }
}

impl Serialize for AlphaChoice {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            AlphaChoice::Value(v) => serializer.serialize_f64(*v),
            AlphaChoice::Auto => serializer.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaChoice {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(v) => Ok(AlphaChoice::Value(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every setting a config file may carry. Unset fields fall back to the
/// subcommand's defaults; command-line flags override both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out: Option<PathBuf>,
    pub n_grid: Option<Vec<u64>>,
    pub env: Option<EnvName>,
    pub map: Option<PathBuf>,
    pub chain_length: Option<usize>,
    pub max_depth: Option<usize>,
    pub alpha: Option<AlphaChoice>,
    pub beta: Option<f64>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub fixture: Option<PathBuf>,
    pub state: Option<usize>,
    pub reward_bound: Option<f64>,
    pub branching: Option<Vec<usize>>,
    pub delta_min: Option<f64>,
    pub scan_cap: Option<u64>,
    pub instance: Option<PathBuf>,
    pub z_grid: Option<Vec<f64>>,
    pub hoeffding_p: Option<f64>,
    pub hoeffding_n: Option<u64>,
    pub hoeffding_eta: Option<f64>,
    pub hoeffding_xi: Option<f64>,
    pub hoeffding_z_grid: Option<Vec<f64>>,
    pub hoeffding_trials: Option<u64>,
    pub gamma: Option<f64>,
    pub tol: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// `flag`, else `file`, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Checks that an `n` grid is nonempty, positive and strictly increasing.
pub fn check_n_grid(grid: &[u64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config("n grid is empty".into()));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(format!(
            "n grid {grid:?} must be positive and strictly increasing"
        )));
    }
    Ok(())
}

pub fn check_trials(trials: u64) -> Result<(), CliError> {
    if trials == 0 {
        Err(CliError::Config("trials must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `[2^lo, 2^(lo+1), ..., 2^hi]`.
pub fn powers_of_two(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

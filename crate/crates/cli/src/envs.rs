use serde::{Deserialize, Serialize};

use polyuct::env::{ChainMdp, FrozenLake, GridSpec, Mdp, DEFAULT_STEP_LIMIT, FROZEN_LAKE_DISCOUNT};

use crate::config::{pick, EnvName, FileConfig};
use crate::{CliError, EnvArgs};

pub const DEFAULT_CHAIN_LENGTH: usize = 5;

/// A concrete environment selected on the command line.
#[derive(Debug, Clone)]
pub enum Env {
    Lake(FrozenLake),
    Chain(ChainMdp),
}

/// What an oracle fixture was computed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvDescriptor {
    pub name: EnvName,
    /// FrozenLake layout, one row per line.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub map: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain_length: Option<usize>,
    pub gamma: f64,
}

/// Runs `$body` with `$m` bound to the concrete environment.
#[macro_export]
macro_rules! with_env {
    ($env:expr, $m:ident => $body:expr) => {
        match $env {
            $crate::envs::Env::Lake($m) => $body,
            $crate::envs::Env::Chain($m) => $body,
        }
    };
}

impl Env {
    pub fn from_args(args: &EnvArgs, file: &FileConfig) -> Result<Self, CliError> {
        let name = pick(args.env, file.env, EnvName::FrozenLake);
        let gamma = pick(args.gamma, file.gamma, FROZEN_LAKE_DISCOUNT);
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(CliError::Config(format!("gamma = {gamma} must lie in (0, 1]")));
        }
        match name {
            EnvName::FrozenLake => {
                let grid = match args.map.clone().or_else(|| file.map.clone()) {
                    Some(path) => GridSpec::from_file(&path).map_err(|e| CliError::Config(e.to_string()))?,
                    None => GridSpec::standard_4x4(),
                };
                Ok(Env::Lake(FrozenLake::new(grid, DEFAULT_STEP_LIMIT, gamma)))
            }
            EnvName::Chain => {
                let length = pick(args.chain_length, file.chain_length, DEFAULT_CHAIN_LENGTH);
                if length < 2 {
                    return Err(CliError::Config("chain_length must be at least 2".into()));
                }
                Ok(Env::Chain(ChainMdp::new(length, gamma)))
            }
        }
    }

    pub fn descriptor(&self) -> EnvDescriptor {
        match self {
            Env::Lake(m) => EnvDescriptor {
                name: EnvName::FrozenLake,
                map: Some(m.grid().to_string()),
                chain_length: None,
                gamma: m.discount(),
            },
            Env::Chain(m) => EnvDescriptor {
                name: EnvName::Chain,
                map: None,
                chain_length: Some(m.length()),
                gamma: m.discount(),
            },
        }
    }

    /// Horizon used when no `max_depth` is given.
    pub fn default_horizon(&self) -> usize {
        match self {
            Env::Lake(m) => m.step_limit().unwrap_or(DEFAULT_STEP_LIMIT),
            Env::Chain(m) => m.length() - 1,
        }
    }

    /// The non-terminal state next to the goal: state 14 on the standard map.
    pub fn default_regret_state(&self) -> usize {
        match self {
            Env::Lake(m) => {
                let g = m.grid();
                (0..g.len())
                    .find(|&s| g.cell(s) == polyuct::env::Cell::Goal)
                    .map(|goal| goal.saturating_sub(1))
                    .unwrap_or(0)
            }
            Env::Chain(m) => m.length() - 2,
        }
    }

    pub fn state_count(&self) -> usize {
        match self {
            Env::Lake(m) => m.grid().len(),
            Env::Chain(m) => m.length(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> EnvArgs {
        EnvArgs {
            env: None,
            map: None,
            chain_length: None,
            gamma: None,
        }
    }

    #[test]
    fn defaults() {
        let env = Env::from_args(&args(), &FileConfig::default()).unwrap();
        assert_eq!(env.default_regret_state(), 14);
        assert_eq!(env.default_horizon(), 400);
        let mut a = args();
        a.env = Some(EnvName::Chain);
        let env = Env::from_args(&a, &FileConfig::default()).unwrap();
        assert_eq!(env.default_regret_state(), 3);
        assert_eq!(env.default_horizon(), 4);
    }
}

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use polyuct::env::{enumerate_transitions, value_iteration};

use crate::config::{pick, FileConfig};
use crate::envs::{Env, EnvDescriptor};
use crate::{with_env, CliError, EnvArgs, Report};

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateValues {
    pub v: f64,
    pub actions: Vec<String>,
    pub q: Vec<f64>,
    /// Index into `actions` of the first maximiser of `q`.
    pub best_action: Option<usize>,
}

/// `V*` and `Q*` per state, with the solver's exit condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub env: EnvDescriptor,
    pub tol: f64,
    pub residual: f64,
    pub iterations: usize,
    pub states: BTreeMap<usize, StateValues>,
}

impl Fixture {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|_| {
            CliError::MissingFixture(format!(
                "oracle fixture {} not found; run `polyuct oracle --out {}` first",
                path.display(),
                path.display()
            ))
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("malformed fixture {}: {e}", path.display())))
    }
}

pub fn solve(env: &Env, tol: f64) -> Result<Fixture, CliError> {
    with_env!(env, m => {
        let model = enumerate_transitions(m).map_err(|e| CliError::Run(e.to_string()))?;
        let gamma = env.descriptor().gamma;
        let sol = value_iteration(&model, gamma, tol).map_err(|e| CliError::Run(e.to_string()))?;
        let states = model
            .states()
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let values = StateValues {
                    v: sol.v[i],
                    actions: model.actions(i).iter().map(|a| format!("{a:?}")).collect(),
                    q: sol.q[i].clone(),
                    best_action: sol.greedy(i).map(|(a, _)| a),
                };
                (s, values)
            })
            .collect();
        Ok(Fixture {
            env: env.descriptor(),
            tol,
            residual: sol.residual,
            iterations: sol.iterations,
            states,
        })
    })
}

pub fn oracle(args: &EnvArgs, tol: Option<f64>, file: &FileConfig) -> Result<Report, CliError> {
    let env = Env::from_args(args, file)?;
    let tol = pick(tol, file.tol, DEFAULT_TOL);
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Config(format!("tol = {tol} must be positive")));
    }
    let fixture = solve(&env, tol)?;
    let mut text = serde_json::to_string_pretty(&fixture).map_err(|e| CliError::Run(e.to_string()))?;
    text.push('\n');
    Ok(Report::ok(text))
}

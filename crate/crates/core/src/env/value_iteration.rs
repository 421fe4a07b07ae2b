use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{EnvError, TransitionModel};

const MAX_SWEEPS: usize = 1_000_000;

/// Optimal values over the states of a [`TransitionModel`], in its state order.
///
/// `q[s][a]` follows the order of `model.actions(s)`; states without actions
/// have `v = 0` and an empty `q` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueSolution {
    pub v: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    /// Sup-norm Bellman residual of `v` on exit.
    pub residual: f64,
    pub iterations: usize,
}

impl ValueSolution {
    /// Index and value of the best action at `state`, first on ties.
    pub fn greedy(&self, state: usize) -> Option<(usize, f64)> {
        self.q[state]
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (a, q)| match best {
                Some((_, b)) if b >= q => best,
                _ => Some((a, q)),
            })
    }
}

fn backup<S, A>(model: &TransitionModel<S, A>, v: &[f64], gamma: f64, s: usize, a: usize) -> f64
where
    S: Clone + Eq + Hash + Debug,
    A: Copy + Debug,
{
    model
        .outcomes(s, a)
        .iter()
        .map(|o| {
            let future = if o.terminal { 0.0 } else { v[o.next] };
            o.prob * (o.reward + gamma * future)
        })
        .sum()
}

fn bellman<S, A>(model: &TransitionModel<S, A>, v: &[f64], gamma: f64) -> Vec<f64>
where
    S: Clone + Eq + Hash + Debug,
    A: Copy + Debug,
{
    (0..v.len())
        .map(|s| {
            (0..model.actions(s).len())
                .map(|a| backup(model, v, gamma, s, a))
                .fold(None, |m: Option<f64>, q| Some(m.map_or(q, |m| m.max(q))))
                .unwrap_or(0.0)
        })
        .collect()
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Iterates the Bellman optimality operator until the sup-norm residual is at
/// most `tol`.
pub fn value_iteration<S, A>(model: &TransitionModel<S, A>, gamma: f64, tol: f64) -> Result<ValueSolution, EnvError>
where
    S: Clone + Eq + Hash + Debug,
    A: Copy + Debug,
{
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(EnvError::InvalidInput(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(EnvError::InvalidInput(format!("tol must be positive, got {tol}")));
    }
    let n = model.states().len();
    let mut v = vec![0.0; n];
    let mut iterations = 0;
    loop {
        let next = bellman(model, &v, gamma);
        iterations += 1;
        let residual = sup_diff(&next, &v);
        v = next;
        if residual <= tol {
            break;
        }
        if iterations >= MAX_SWEEPS {
            return Err(EnvError::NoConvergence { tol, iterations });
        }
    }
    let residual = sup_diff(&bellman(model, &v, gamma), &v);
    let q = (0..n)
        .map(|s| {
            (0..model.actions(s).len())
                .map(|a| backup(model, &v, gamma, s, a))
                .collect()
        })
        .collect();
    Ok(ValueSolution {
        v,
        q,
        residual,
        iterations,
    })
}

/// Optimal values when at most `horizon` steps remain, by backward induction.
///
/// This is the target of a search whose simulations are cut off at
/// `horizon` steps.
pub fn finite_horizon_values<S, A>(model: &TransitionModel<S, A>, gamma: f64, horizon: usize) -> ValueSolution
where
    S: Clone + Eq + Hash + Debug,
    A: Copy + Debug,
{
    let n = model.states().len();
    let mut v = vec![0.0; n];
    let mut q = vec![Vec::new(); n];
    for _ in 0..horizon {
        q = (0..n)
            .map(|s| {
                (0..model.actions(s).len())
                    .map(|a| backup(model, &v, gamma, s, a))
                    .collect::<Vec<f64>>()
            })
            .collect();
        v = q
            .iter()
            .map(|row| {
                row.iter()
                    .copied()
                    .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
                    .unwrap_or(0.0)
            })
            .collect();
    }
    if horizon == 0 {
        q = (0..n).map(|s| vec![0.0; model.actions(s).len()]).collect();
    }
    ValueSolution {
        v,
        q,
        residual: f64::NAN,
        iterations: horizon,
    }
}

//! Browser bindings: bonus curves, successor-count tails and FrozenLake
//! search. Results cross the boundary as JSON strings.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use polyuct::env::{enumerate_transitions, frozen_lake_4x4, value_iteration, Mdp};
use polyuct::mab_sim::hoeffding_tail_grid;
use polyuct::mcts::{search, SearchConfig};
use polyuct::policy::{exploration_bonus, ExplorationParams};

fn to_json<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

/// `B(t, s)` for `s = 1..=s_max` at a fixed `t`.
#[wasm_bindgen]
pub fn bonus_curve(alpha: f64, beta: f64, xi: f64, eta: f64, t: u64, s_max: u32) -> Vec<f64> {
    let params = ExplorationParams::new(alpha, beta, xi, eta);
    (1..=u64::from(s_max))
        .map(|s| exploration_bonus(t, s, &params))
        .collect()
}

#[derive(Serialize)]
struct TailRow {
    z: f64,
    upper: f64,
    lower: f64,
    bound: f64,
}

/// Empirical tails of `N − np` for a Binomial successor count, against the
/// polynomial bound, for `z = 1..=z_max`.
#[wasm_bindgen]
pub fn successor_tails(
    p: f64,
    n: u64,
    eta: f64,
    xi: f64,
    z_max: u32,
    trials: u64,
    seed: u64,
) -> Result<String, JsError> {
    let zs: Vec<f64> = (1..=z_max).map(f64::from).collect();
    let rows = hoeffding_tail_grid(p, n, &zs, eta, xi, trials, seed).map_err(|e| JsError::new(&e.to_string()))?;
    let rows: Vec<TailRow> = rows
        .iter()
        .map(|r| TailRow {
            z: r.z,
            upper: r.upper_freq,
            lower: r.lower_freq,
            bound: r.bound,
        })
        .collect();
    to_json(&rows)
}

#[derive(Serialize)]
struct CellView {
    state: usize,
    terminal: bool,
    v_star: f64,
    best: Option<String>,
    search: Option<String>,
    means: Vec<Option<f64>>,
    pulls: Vec<u64>,
}

/// Per-cell optimal values next to one search per non-terminal cell with
/// `simulations` passes.
#[wasm_bindgen]
pub fn lake_search(simulations: u64, max_depth: usize, seed: u64) -> Result<String, JsError> {
    let lake = frozen_lake_4x4();
    let model = enumerate_transitions(&lake).map_err(|e| JsError::new(&e.to_string()))?;
    let solution = value_iteration(&model, lake.discount(), 1e-12).map_err(|e| JsError::new(&e.to_string()))?;
    let config = SearchConfig::new(simulations, max_depth);
    let mut cells = Vec::new();
    for (i, &state) in model.states().iter().enumerate() {
        let best = solution.greedy(i).map(|(a, _)| format!("{:?}", model.actions(i)[a]));
        let mut cell = CellView {
            state,
            terminal: lake.is_terminal(&state),
            v_star: solution.v[i],
            best,
            search: None,
            means: Vec::new(),
            pulls: Vec::new(),
        };
        if !cell.terminal {
            let r = search(&lake, state, &config, seed ^ state as u64).map_err(|e| JsError::new(&e.to_string()))?;
            cell.search = Some(format!("{:?}", r.action));
            cell.means = r.means();
            cell.pulls = r.root_stats.iter().map(|s| s.pulls()).collect();
        }
        cells.push(cell);
    }
    to_json(&cells)
}

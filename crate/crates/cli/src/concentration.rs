//! Tail frequencies of the root average and of successor counts against
//! their polynomial bounds.

use std::path::PathBuf;

use polyuct::constants::{leaf_beta, root_constants, DerivedConstants, LayerConstants, DEFAULT_SCAN_CAP};
use polyuct::harness::derive_seed;
use polyuct::mab_sim::{estimate_tail_surface, hoeffding_tail_grid, MabInstance, TailEstimate};
use polyuct::policy::ExplorationParams;

use crate::config::{check_n_grid, check_trials, pick, AlphaChoice, FileConfig};
use crate::{csv_line, fmt_f64, CliError, Common, Report, DEFAULT_SEED};

pub const HEADER: &str = "kind,n,z,trials,upper_freq,lower_freq,bound,vacuous,pass";

/// Two arms with two successors each; arm 0 mixes a Bernoulli and a drifting
/// leaf (mean 0.9), arm 1 a uniform and a constant leaf (mean 0.1).
pub const DEFAULT_INSTANCE: &str = include_str!("../data/two_arm.json");

pub const DEFAULT_TRIALS: u64 = 2000;
pub const DEFAULT_ALPHA: f64 = 4.0;
pub const DEFAULT_XI: f64 = 16.0;
pub const DEFAULT_ETA: f64 = 0.5;
pub const DEFAULT_HOEFFDING_P: f64 = 1.0 / 3.0;
pub const DEFAULT_HOEFFDING_N: u64 = 400;
pub const DEFAULT_HOEFFDING_ETA: f64 = 0.5;
pub const DEFAULT_HOEFFDING_XI: f64 = 2.0;
pub const DEFAULT_HOEFFDING_TRIALS: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct ConcentrationInput {
    pub instance: MabInstance,
    pub seed: u64,
    pub trials: u64,
    pub n_grid: Vec<u64>,
    /// `None` picks powers of ten up to past the vacuity threshold.
    pub z_grid: Option<Vec<f64>>,
    pub alpha: f64,
    pub xi: f64,
    pub eta: f64,
    pub scan_cap: u64,
    pub hoeffding_p: f64,
    pub hoeffding_n: u64,
    pub hoeffding_eta: f64,
    pub hoeffding_xi: f64,
    pub hoeffding_z_grid: Vec<f64>,
    pub hoeffding_trials: u64,
}

impl ConcentrationInput {
    #[allow(clippy::too_many_arguments)]
    pub fn resolve(
        common: &Common,
        instance: Option<PathBuf>,
        n_grid: Option<Vec<u64>>,
        z_grid: Option<Vec<f64>>,
        alpha: Option<f64>,
        xi: Option<f64>,
        eta: Option<f64>,
        scan_cap: Option<u64>,
        hoeffding_p: Option<f64>,
        hoeffding_n: Option<u64>,
        hoeffding_trials: Option<u64>,
        file: &FileConfig,
    ) -> Result<Self, CliError> {
        let text = match instance.or_else(|| file.instance.clone()) {
            Some(path) => std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("cannot read instance {}: {e}", path.display())))?,
            None => DEFAULT_INSTANCE.to_string(),
        };
        let instance = MabInstance::from_json(&text).map_err(|e| CliError::Config(format!("bad instance: {e}")))?;
        let file_alpha = match file.alpha {
            Some(AlphaChoice::Value(a)) => Some(a),
            Some(AlphaChoice::Auto) => {
                return Err(CliError::Config(
                    "alpha = auto is only meaningful for `constants`".into(),
                ))
            }
            None => None,
        };
        let input = Self {
            instance,
            seed: pick(common.seed, file.seed, DEFAULT_SEED),
            trials: pick(common.trials, file.trials, DEFAULT_TRIALS),
            n_grid: pick(n_grid, file.n_grid.clone(), vec![100, 1000, 10_000]),
            z_grid: z_grid.or_else(|| file.z_grid.clone()),
            alpha: pick(alpha, file_alpha, DEFAULT_ALPHA),
            xi: pick(xi, file.xi, DEFAULT_XI),
            eta: pick(eta, file.eta, DEFAULT_ETA),
            scan_cap: pick(scan_cap, file.scan_cap, DEFAULT_SCAN_CAP),
            hoeffding_p: pick(hoeffding_p, file.hoeffding_p, DEFAULT_HOEFFDING_P),
            hoeffding_n: pick(hoeffding_n, file.hoeffding_n, DEFAULT_HOEFFDING_N),
            hoeffding_eta: file.hoeffding_eta.unwrap_or(DEFAULT_HOEFFDING_ETA),
            hoeffding_xi: file.hoeffding_xi.unwrap_or(DEFAULT_HOEFFDING_XI),
            hoeffding_z_grid: file.hoeffding_z_grid.clone().unwrap_or_else(|| vec![1.0, 2.0, 4.0]),
            hoeffding_trials: pick(hoeffding_trials, file.hoeffding_trials, DEFAULT_HOEFFDING_TRIALS),
        };
        check_n_grid(&input.n_grid)?;
        check_trials(input.trials)?;
        check_trials(input.hoeffding_trials)?;
        Ok(input)
    }
}

/// Leaf constants for rewards bounded by `R` and the root constants of one
/// step above them.
pub fn instance_constants(input: &ConcentrationInput) -> Result<(LayerConstants, DerivedConstants), CliError> {
    let shape = input.instance.shape().map_err(|e| CliError::Run(e.to_string()))?;
    let leaf = LayerConstants::new(leaf_beta(input.instance.reward_bound(), input.xi), input.xi, input.eta)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let root = root_constants(&leaf, &shape, input.alpha, input.scan_cap).map_err(|e| CliError::Run(e.to_string()))?;
    Ok((leaf, root))
}

/// `1, 10, 100, …` up to one decade past `β″^{1/ξ″}`.
pub fn default_z_grid(root: &DerivedConstants) -> Vec<f64> {
    let threshold = root.beta_dd.powf(1.0 / root.xi_dd);
    let top = threshold.log10().ceil().max(0.0) as i32 + 1;
    (0..=top).map(|k| 10f64.powi(k)).collect()
}

fn row(kind: &str, t: &TailEstimate) -> String {
    csv_line(&[
        kind.to_string(),
        t.n.to_string(),
        fmt_f64(t.z),
        t.trials.to_string(),
        fmt_f64(t.upper_freq),
        fmt_f64(t.lower_freq),
        fmt_f64(t.bound),
        t.vacuous.to_string(),
        t.within_bound().to_string(),
    ])
}

pub fn concentration(input: ConcentrationInput) -> Result<Report, CliError> {
    let (leaf, root) = instance_constants(&input)?;
    // Each arm's average concentrates with the intermediate constant β′.
    let params = ExplorationParams::new(input.alpha, root.beta_prime, leaf.xi, leaf.eta);
    let zs = input.z_grid.clone().unwrap_or_else(|| default_z_grid(&root));
    let theorem = estimate_tail_surface(
        &input.instance,
        &input.n_grid,
        &zs,
        &root,
        &params,
        input.trials,
        derive_seed(input.seed, 0),
    )
    .map_err(|e| CliError::Run(e.to_string()))?;
    let lemma = hoeffding_tail_grid(
        input.hoeffding_p,
        input.hoeffding_n,
        &input.hoeffding_z_grid,
        input.hoeffding_eta,
        input.hoeffding_xi,
        input.hoeffding_trials,
        derive_seed(input.seed, 1),
    )
    .map_err(|e| CliError::Run(e.to_string()))?;

    let mut text = format!("{HEADER}\n");
    let mut failures = 0;
    for (kind, rows) in [("theorem", &theorem), ("lemma", &lemma)] {
        for t in rows.iter() {
            failures += usize::from(!t.within_bound());
            text.push_str(&row(kind, t));
        }
    }
    if failures > 0 {
        eprintln!("{failures} non-vacuous cells exceed their bound plus 3 sigma");
    }
    Ok(Report {
        text,
        has_errors: failures > 0,
    })
}

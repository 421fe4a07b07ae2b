//! Two-phase bandit simulator: a UCB selection over `K` actions followed by a
//! random transition to one of `K_i` successor states, each with its own
//! reward process. Also hosts the Monte Carlo checks of the convergence and
//! tail bounds.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandit::{ArmStats, BanditError, ExactSum, RewardProcess, TransitionTable};
use crate::constants::{lemma_beta_t, DerivedConstants, ProblemShape};
use crate::harness::{map_trials, stream_rng, Stream, Summary};
use crate::policy::{select_arm, validate_params, ExplorationParams, ParamViolation, ValidationMode};

/// Arm means closer than this are considered equal when locating `i*`.
pub const OPTIMUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Bandit(#[from] BanditError),
    #[error("inconsistent instance: {0}")]
    Dimension(String),
    #[error("optimal arm is not unique: arms {first} and {second} both reach {mean}")]
    NonUniqueOptimum { first: usize, second: usize, mean: f64 },
    #[error("invalid exploration parameters: {}", .0.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "))]
    Params(Vec<ParamViolation>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawInstance {
    reward_bound: f64,
    transitions: TransitionTable,
    leaves: Vec<Vec<RewardProcess>>,
}

/// A bandit whose arm `i` leads to successor `j` with probability `p^i_j`,
/// where successor `(i, j)` pays rewards from its own process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct MabInstance {
    reward_bound: f64,
    transitions: TransitionTable,
    leaves: Vec<Vec<RewardProcess>>,
}

impl TryFrom<RawInstance> for MabInstance {
    type Error = SimError;

    fn try_from(raw: RawInstance) -> Result<Self, Self::Error> {
        Self::new(raw.reward_bound, raw.transitions, raw.leaves)
    }
}

impl From<MabInstance> for RawInstance {
    fn from(m: MabInstance) -> Self {
        RawInstance {
            reward_bound: m.reward_bound,
            transitions: m.transitions,
            leaves: m.leaves,
        }
    }
}

impl MabInstance {
    pub fn new(
        reward_bound: f64,
        transitions: TransitionTable,
        leaves: Vec<Vec<RewardProcess>>,
    ) -> Result<Self, SimError> {
        if !(reward_bound > 0.0 && reward_bound.is_finite()) {
            return Err(SimError::Dimension(format!(
                "reward bound {reward_bound} must be positive"
            )));
        }
        if transitions.arms() == 0 {
            return Err(SimError::Dimension("at least one arm is required".into()));
        }
        if leaves.len() != transitions.arms() {
            return Err(SimError::Dimension(format!(
                "{} transition rows but {} leaf rows",
                transitions.arms(),
                leaves.len()
            )));
        }
        for (i, row) in leaves.iter().enumerate() {
            if row.len() != transitions.row(i).len() {
                return Err(SimError::Dimension(format!(
                    "arm {i} has {} successors but {} processes",
                    transitions.row(i).len(),
                    row.len()
                )));
            }
            for p in row {
                p.validate(reward_bound)?;
            }
        }
        Ok(Self {
            reward_bound,
            transitions,
            leaves,
        })
    }

    /// Deterministic transitions with one process per arm.
    pub fn deterministic(reward_bound: f64, processes: Vec<RewardProcess>) -> Result<Self, SimError> {
        let table = TransitionTable::deterministic(processes.len());
        Self::new(reward_bound, table, processes.into_iter().map(|p| vec![p]).collect())
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn arms(&self) -> usize {
        self.transitions.arms()
    }

    pub fn reward_bound(&self) -> f64 {
        self.reward_bound
    }

    pub fn transitions(&self) -> &TransitionTable {
        &self.transitions
    }

    pub fn process(&self, arm: usize, successor: usize) -> &RewardProcess {
        &self.leaves[arm][successor]
    }

    /// Shape used by the bound calculator, with the exact optimality gap.
    pub fn shape(&self) -> Result<ProblemShape, SimError> {
        let means = exact_arm_means(self)?;
        let delta = means
            .delta_min
            .ok_or_else(|| SimError::InvalidArgument("a single-arm instance has no optimality gap".into()))?;
        ProblemShape::new(self.reward_bound, self.transitions.branching(), delta)
            .map_err(|e| SimError::InvalidArgument(e.to_string()))
    }
}

/// Closed-form arm means `μ_i = Σ_j p^i_j μ^i_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmMeans {
    pub means: Vec<f64>,
    pub best: usize,
    pub best_mean: f64,
    /// `None` for a single arm.
    pub delta_min: Option<f64>,
}

pub fn exact_arm_means(instance: &MabInstance) -> Result<ArmMeans, SimError> {
    let means: Vec<f64> = (0..instance.arms())
        .map(|i| {
            instance
                .transitions
                .row(i)
                .iter()
                .zip(&instance.leaves[i])
                .map(|(p, process)| p * process.limit_mean())
                .sum()
        })
        .collect();
    let mut best = 0;
    for (i, &m) in means.iter().enumerate() {
        if m > means[best] {
            best = i;
        }
    }
    let best_mean = means[best];
    if let Some(other) = (0..means.len()).find(|&i| i != best && (best_mean - means[i]).abs() <= OPTIMUM_TOLERANCE) {
        return Err(SimError::NonUniqueOptimum {
            first: best.min(other),
            second: best.max(other),
            mean: best_mean,
        });
    }
    let delta_min = means
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .map(|(_, &m)| best_mean - m)
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))));
    Ok(ArmMeans {
        means,
        best,
        best_mean,
        delta_min,
    })
}

/// One entry of the selection log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub arm: usize,
    pub successor: usize,
}

/// Counting record of a bandit run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    steps: u64,
    arms: Vec<ArmStats>,
    leaves: Vec<Vec<ArmStats>>,
    total: ExactSum,
    log: Vec<Selection>,
    log_cap: usize,
}

impl RunTrace {
    fn empty(instance: &MabInstance, log_cap: usize) -> Self {
        Self {
            steps: 0,
            arms: vec![ArmStats::new(); instance.arms()],
            leaves: instance
                .transitions
                .branching()
                .into_iter()
                .map(|k| vec![ArmStats::new(); k])
                .collect(),
            total: ExactSum::new(),
            log: Vec::new(),
            log_cap,
        }
    }

    /// `n`.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `T_i(n)` for every arm.
    pub fn arm_pulls(&self) -> Vec<u64> {
        self.arms.iter().map(ArmStats::pulls).collect()
    }

    pub fn arm_stats(&self) -> &[ArmStats] {
        &self.arms
    }

    /// Per-successor statistics; `pulls()` is `T^i_j(T_i(n))`.
    pub fn leaf_stats(&self) -> &[Vec<ArmStats>] {
        &self.leaves
    }

    /// Sum of every reward, accumulated in step order.
    pub fn total_reward(&self) -> &ExactSum {
        &self.total
    }

    /// `X̄_n`.
    pub fn empirical_mean(&self) -> f64 {
        self.total.value() / self.steps as f64
    }

    /// `n X̄_n − n μ`.
    pub fn deviation(&self, mu: f64) -> f64 {
        let mut sum = self.total.clone();
        sum.add(-(self.steps as f64) * mu);
        sum.value()
    }

    pub fn selections(&self) -> &[Selection] {
        &self.log
    }

    /// Checks `Σ_i T_i = n`, `Σ_j T^i_j = T_i` and that the per-successor sums
    /// reconstruct the step-order total exactly.
    pub fn verify_counts(&self) -> Result<(), String> {
        let pulls: u64 = self.arms.iter().map(ArmStats::pulls).sum();
        if pulls != self.steps {
            return Err(format!("sum of arm pulls {pulls} != n = {}", self.steps));
        }
        let mut reconstructed = ExactSum::new();
        for (i, (arm, leaves)) in self.arms.iter().zip(&self.leaves).enumerate() {
            let leaf_pulls: u64 = leaves.iter().map(ArmStats::pulls).sum();
            if leaf_pulls != arm.pulls() {
                return Err(format!(
                    "arm {i}: successor pulls {leaf_pulls} != T_i = {}",
                    arm.pulls()
                ));
            }
            for leaf in leaves {
                reconstructed.merge(leaf.exact_sum());
            }
        }
        if reconstructed.value() != self.total.value() {
            return Err(format!(
                "sum-form total {} != step-order total {}",
                reconstructed.value(),
                self.total.value()
            ));
        }
        Ok(())
    }
}

/// Stepwise UCB run over a [`MabInstance`].
///
/// Arm selection, successor sampling and reward draws use separate random
/// streams derived from one seed.
pub struct UcbSimulator<'a> {
    instance: &'a MabInstance,
    params: ExplorationParams,
    selection: ChaCha8Rng,
    transition: ChaCha8Rng,
    reward: ChaCha8Rng,
    trace: RunTrace,
}

impl<'a> UcbSimulator<'a> {
    pub fn new(instance: &'a MabInstance, params: ExplorationParams, seed: u64) -> Self {
        Self {
            instance,
            params,
            selection: stream_rng(seed, Stream::Selection),
            transition: stream_rng(seed, Stream::Transition),
            reward: stream_rng(seed, Stream::Reward),
            trace: RunTrace::empty(instance, 0),
        }
    }

    /// Keeps the first `cap` selections.
    pub fn with_log(mut self, cap: usize) -> Self {
        self.trace.log_cap = cap;
        self
    }

    pub fn step(&mut self) {
        let trace = &mut self.trace;
        let t = trace.steps + 1;
        let arm =
            select_arm(&trace.arms, t, &self.params, &mut self.selection).expect("instances have at least one arm");
        let u: f64 = self.transition.gen();
        let successor = self.instance.transitions.successor(arm, u);
        let leaf = &mut trace.leaves[arm][successor];
        let count = leaf.pulls() + 1;
        let reward = self.instance.leaves[arm][successor].sample(count, self.instance.reward_bound, &mut self.reward);
        leaf.push(reward);
        trace.arms[arm].push(reward);
        trace.total.add(reward);
        trace.steps = t;
        if trace.log.len() < trace.log_cap {
            trace.log.push(Selection { arm, successor });
        }
    }

    pub fn run_until(&mut self, n: u64) {
        while self.trace.steps < n {
            self.step();
        }
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn into_trace(self) -> RunTrace {
        self.trace
    }
}

fn check_practical(params: &ExplorationParams) -> Result<(), SimError> {
    validate_params(params, ValidationMode::Practical).map_err(SimError::Params)
}

/// Runs `n` steps of polynomial UCB with random transitions.
pub fn run_ucb(instance: &MabInstance, n: u64, params: &ExplorationParams, seed: u64) -> Result<RunTrace, SimError> {
    if n == 0 {
        return Err(SimError::InvalidArgument("n must be at least 1".into()));
    }
    check_practical(params)?;
    let mut sim = UcbSimulator::new(instance, *params, seed);
    sim.run_until(n);
    Ok(sim.into_trace())
}

/// `3 √(f (1 − f) / trials)`.
pub fn binomial_slack(freq: f64, trials: u64) -> f64 {
    3.0 * (freq * (1.0 - freq) / trials as f64).sqrt()
}

/// Wilson score interval at `z_score` standard deviations.
pub fn wilson_interval(freq: f64, trials: u64, z_score: f64) -> (f64, f64) {
    let n = trials as f64;
    let z2 = z_score * z_score;
    let centre = (freq + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z_score * (freq * (1.0 - freq) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Empirical frequencies of the two tail events at one `(n, z)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub n: u64,
    pub z: f64,
    pub trials: u64,
    pub upper_freq: f64,
    pub lower_freq: f64,
    /// `min(1, β / z^ξ)`.
    pub bound: f64,
    /// The unclamped bound is at least 1 and carries no information.
    pub vacuous: bool,
}

impl TailEstimate {
    /// Both frequencies lie within `bound + 3σ`; vacuous cells always pass.
    pub fn within_bound(&self) -> bool {
        self.vacuous
            || (self.upper_freq <= self.bound + binomial_slack(self.upper_freq, self.trials)
                && self.lower_freq <= self.bound + binomial_slack(self.lower_freq, self.trials))
    }
}

fn check_z(zs: &[f64]) -> Result<(), SimError> {
    if zs.is_empty() {
        return Err(SimError::InvalidArgument("z grid is empty".into()));
    }
    if let Some(z) = zs.iter().find(|z| !(**z >= 1.0)) {
        return Err(SimError::InvalidArgument(format!("z = {z} must be at least 1")));
    }
    Ok(())
}

fn check_grid(ns: &[u64]) -> Result<(), SimError> {
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimError::InvalidArgument(format!(
            "n grid {ns:?} must be nonempty, positive and strictly increasing"
        )));
    }
    Ok(())
}

fn tail_cells(
    n: u64,
    zs: &[f64],
    trials: u64,
    upper_scale: f64,
    deviations: &[f64],
    beta: f64,
    xi: f64,
) -> Vec<TailEstimate> {
    zs.iter()
        .map(|&z| {
            let threshold = upper_scale * z;
            let upper = deviations.iter().filter(|&&d| d >= threshold).count();
            let lower = deviations.iter().filter(|&&d| d <= -threshold).count();
            let raw = beta / z.powf(xi);
            TailEstimate {
                n,
                z,
                trials,
                upper_freq: upper as f64 / trials as f64,
                lower_freq: lower as f64 / trials as f64,
                bound: raw.min(1.0),
                vacuous: raw >= 1.0,
            }
        })
        .collect()
}

/// Tail frequencies of `n X̄_n − n μ_{i*}` over a grid of `n` and `z`.
///
/// Every trial runs once up to the largest `n`; smaller `n` read the same
/// run's prefix. Rows are ordered by `n`, then by `z`.
pub fn estimate_tail_surface(
    instance: &MabInstance,
    ns: &[u64],
    zs: &[f64],
    root: &DerivedConstants,
    params: &ExplorationParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<TailEstimate>, SimError> {
    check_grid(ns)?;
    check_z(zs)?;
    validate_params(params, ValidationMode::Strict).map_err(SimError::Params)?;
    if trials == 0 {
        return Err(SimError::InvalidArgument("trials must be at least 1".into()));
    }
    let mu = exact_arm_means(instance)?.best_mean;
    let per_trial: Vec<Vec<f64>> = map_trials(trials, seed, |s| {
        let mut sim = UcbSimulator::new(instance, *params, s);
        ns.iter()
            .map(|&n| {
                sim.run_until(n);
                sim.trace().deviation(mu)
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(ns.len() * zs.len());
    for (k, &n) in ns.iter().enumerate() {
        let deviations: Vec<f64> = per_trial.iter().map(|d| d[k]).collect();
        let scale = (n as f64).powf(root.eta_dd);
        rows.extend(tail_cells(n, zs, trials, scale, &deviations, root.beta_dd, root.xi_dd));
    }
    Ok(rows)
}

/// Tail frequencies at one `(n, z)` cell.
pub fn estimate_tail(
    instance: &MabInstance,
    n: u64,
    z: f64,
    root: &DerivedConstants,
    params: &ExplorationParams,
    trials: u64,
    seed: u64,
) -> Result<TailEstimate, SimError> {
    Ok(estimate_tail_surface(instance, &[n], &[z], root, params, trials, seed)?[0])
}

/// Simulates successor counts `T̃_j(n) ~ Binomial(n, p)` and measures how often
/// they stray `n^η z` from `n p`, against `min(1, β_T / z^ξ)`.
#[allow(clippy::too_many_arguments)]
pub fn hoeffding_tail_grid(
    p: f64,
    n: u64,
    zs: &[f64],
    eta: f64,
    xi: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<TailEstimate>, SimError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::InvalidArgument(format!("p = {p} is not a probability")));
    }
    if n == 0 || trials == 0 {
        return Err(SimError::InvalidArgument("n and trials must be positive".into()));
    }
    if !(0.5..1.0).contains(&eta) || !(xi > 0.0) {
        return Err(SimError::InvalidArgument(format!(
            "need 1/2 <= eta < 1 and xi > 0, got eta = {eta}, xi = {xi}"
        )));
    }
    check_z(zs)?;
    let expected = n as f64 * p;
    let deviations: Vec<f64> = map_trials(trials, seed, |s| {
        let mut rng = stream_rng(s, Stream::Transition);
        let count = (0..n).filter(|_| rng.gen::<f64>() < p).count();
        count as f64 - expected
    });
    let scale = (n as f64).powf(eta);
    Ok(tail_cells(n, zs, trials, scale, &deviations, lemma_beta_t(xi), xi))
}

pub fn hoeffding_tail_check(
    p: f64,
    n: u64,
    z: f64,
    eta: f64,
    xi: f64,
    trials: u64,
    seed: u64,
) -> Result<TailEstimate, SimError> {
    Ok(hoeffding_tail_grid(p, n, &[z], eta, xi, trials, seed)?[0])
}

/// Monte Carlo mean and spread of `X̄_n` at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: u64,
    pub mean: f64,
    pub std: f64,
}

pub fn convergence_curve(
    instance: &MabInstance,
    params: &ExplorationParams,
    n_grid: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Vec<CurvePoint>, SimError> {
    check_grid(n_grid)?;
    check_practical(params)?;
    if trials == 0 {
        return Err(SimError::InvalidArgument("trials must be at least 1".into()));
    }
    let per_trial: Vec<Vec<f64>> = map_trials(trials, seed, |s| {
        let mut sim = UcbSimulator::new(instance, *params, s);
        n_grid
            .iter()
            .map(|&n| {
                sim.run_until(n);
                sim.trace().empirical_mean()
            })
            .collect()
    });
    Ok(n_grid
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let values: Vec<f64> = per_trial.iter().map(|v| v[k]).collect();
            let s = Summary::of(&values);
            CurvePoint {
                n,
                mean: s.mean,
                std: s.std,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::RewardProcess as P;

    fn two_constants() -> MabInstance {
        MabInstance::deterministic(1.0, vec![P::constant(0.9), P::constant(0.1)]).unwrap()
    }

    #[test]
    fn deterministic_means() {
        let m = exact_arm_means(&two_constants()).unwrap();
        assert_eq!(m.means, vec![0.9, 0.1]);
        assert_eq!(m.best, 0);
        assert!((m.delta_min.unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn weighted_successor_mean() {
        let third = 1.0 / 3.0;
        let inst = MabInstance::new(
            1.0,
            TransitionTable::new(vec![vec![third; 3], vec![1.0]]).unwrap(),
            vec![
                vec![P::constant(0.0), P::constant(0.3), P::constant(0.6)],
                vec![P::constant(0.1)],
            ],
        )
        .unwrap();
        let m = exact_arm_means(&inst).unwrap();
        assert!((m.means[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn tied_optimum_rejected() {
        let inst = MabInstance::deterministic(1.0, vec![P::constant(0.5), P::constant(0.5)]).unwrap();
        assert!(matches!(
            exact_arm_means(&inst),
            Err(SimError::NonUniqueOptimum {
                first: 0,
                second: 1,
                ..
            })
        ));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = MabInstance::new(
            1.0,
            TransitionTable::new(vec![vec![0.5, 0.5]]).unwrap(),
            vec![vec![P::constant(0.0)]],
        )
        .unwrap_err();
        assert!(matches!(err, SimError::Dimension(_)));
        let err = MabInstance::deterministic(0.5, vec![P::constant(0.9)]).unwrap_err();
        assert!(matches!(err, SimError::Bandit(_)));
    }

    #[test]
    fn instance_json_schema() {
        let text = r#"{
            "reward_bound": 1.0,
            "transitions": [[0.5, 0.5], [1.0]],
            "leaves": [
                [{"kind": "bernoulli_scaled", "p": 0.5, "lo": 0.0, "hi": 1.0},
                 {"kind": "drift", "limit": 0.7, "decay": 0.5}],
                [{"kind": "uniform", "lo": 0.0, "hi": 0.4}]
            ]
        }"#;
        let inst = MabInstance::from_json(text).unwrap();
        assert_eq!(inst.arms(), 2);
        let m = exact_arm_means(&inst).unwrap();
        assert!((m.means[0] - 0.6).abs() < 1e-15);
        let back: MabInstance = serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
        assert!(MabInstance::from_json(r#"{"reward_bound": 1.0, "transitions": [[1.0]], "leaves": []}"#).is_err());
    }

    #[test]
    fn first_k_steps_pull_every_arm() {
        let inst = MabInstance::deterministic(
            1.0,
            vec![P::constant(0.2), P::constant(0.4), P::constant(0.1), P::constant(0.3)],
        )
        .unwrap();
        let trace = run_ucb(&inst, 4, &ExplorationParams::practical(), 5).unwrap();
        assert_eq!(trace.arm_pulls(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn best_arm_dominates() {
        let trace = run_ucb(&two_constants(), 10_000, &ExplorationParams::practical(), 1).unwrap();
        let share = trace.arm_pulls()[0] as f64 / 10_000.0;
        assert!(share >= 0.9, "{share}");
    }

    #[test]
    fn seeded_replay_is_identical() {
        let third = 1.0 / 3.0;
        let inst = MabInstance::new(
            1.0,
            TransitionTable::new(vec![vec![third; 3], vec![0.5, 0.5]]).unwrap(),
            vec![
                vec![
                    P::bernoulli(0.2, 0.0, 1.0),
                    P::constant(0.3),
                    P::Uniform { lo: 0.0, hi: 1.0 },
                ],
                vec![P::bernoulli(0.6, -1.0, 1.0), P::Drift { limit: 0.4, decay: 0.9 }],
            ],
        )
        .unwrap();
        let p = ExplorationParams::practical();
        let a = UcbSimulator::new(&inst, p, 42).with_log(1000);
        let b = UcbSimulator::new(&inst, p, 42).with_log(1000);
        let run = |mut s: UcbSimulator| {
            s.run_until(800);
            s.into_trace()
        };
        let (ta, tb) = (run(a), run(b));
        assert_eq!(ta, tb);
        assert_eq!(ta.selections().len(), 800);
        ta.verify_counts().unwrap();
    }

    #[test]
    fn invalid_inputs() {
        let inst = two_constants();
        assert!(run_ucb(&inst, 0, &ExplorationParams::practical(), 0).is_err());
        let bad = ExplorationParams::new(-1.0, 2.0, 1.0, 0.5);
        assert!(matches!(run_ucb(&inst, 10, &bad, 0), Err(SimError::Params(_))));
        assert!(hoeffding_tail_check(1.5, 10, 1.0, 0.5, 2.0, 10, 0).is_err());
        assert!(hoeffding_tail_check(0.5, 10, 0.5, 0.5, 2.0, 10, 0).is_err());
        assert!(convergence_curve(&inst, &ExplorationParams::practical(), &[10, 10], 2, 0).is_err());
    }

    #[test]
    fn degenerate_binomial_never_deviates() {
        for p in [0.0, 1.0] {
            let rows = hoeffding_tail_grid(p, 100, &[1.0, 2.0, 5.0], 0.5, 2.0, 200, 3).unwrap();
            for r in rows {
                assert_eq!(r.upper_freq, 0.0);
                assert_eq!(r.lower_freq, 0.0);
            }
        }
    }

    #[test]
    fn hoeffding_frequencies_nested_in_z() {
        let zs = [1.0, 1.25, 1.5, 2.0, 3.0];
        let rows = hoeffding_tail_grid(0.3, 50, &zs, 0.5, 2.0, 4000, 11).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].upper_freq <= w[0].upper_freq);
            assert!(w[1].lower_freq <= w[0].lower_freq);
        }
        assert!(rows[0].vacuous);
        assert!(!rows[3].vacuous);
        assert_eq!(rows[3].bound, crate::constants::BETA_FLOOR / 4.0);
    }

    #[test]
    fn single_constant_arm_curve_is_flat() {
        let inst = MabInstance::deterministic(1.0, vec![P::constant(0.25)]).unwrap();
        let pts = convergence_curve(&inst, &ExplorationParams::practical(), &[1, 10, 100], 5, 0).unwrap();
        for p in pts {
            assert!((p.mean - 0.25).abs() < 1e-15);
            assert_eq!(p.std, 0.0);
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(0.1, 1000, 3.0);
        assert!(lo < 0.1 && 0.1 < hi);
        assert_eq!(wilson_interval(0.0, 100, 3.0).0, 0.0);
    }
}

//! Arm statistics, transition tables, reward processes and the concentration
//! assumption parameters shared by the simulator, the planner and the bound
//! calculator.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on the sum of a transition row.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BanditError {
    #[error("reward {reward} lies outside [-{bound}, {bound}]")]
    RewardOutOfBounds { reward: f64, bound: f64 },
    #[error("invalid assumption parameters: {0}")]
    InvalidAssumption(String),
    #[error("invalid reward process: {0}")]
    InvalidProcess(String),
    #[error("invalid transition table: {}", join_errors(.0))]
    Table(Vec<TableError>),
}

fn join_errors(errors: &[TableError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Exact floating-point accumulator.
///
/// Keeps a list of non-overlapping partial sums (Shewchuk's algorithm) so the
/// represented value is the exact real sum of every added term. [`value`]
/// rounds that sum once, which makes the result independent of the order in
/// which terms were added.
///
/// [`value`]: ExactSum::value
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut x: f64) {
        let mut i = 0;
        for k in 0..self.partials.len() {
            let mut y = self.partials[k];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// Adds every term held by `other`.
    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
    }

    /// The exact sum rounded to the nearest `f64`.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Round-half-even correction when the remaining partials push the
        // discarded low part past the halfway point.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut sum = ExactSum::new();
        for x in iter {
            sum.add(x);
        }
        sum
    }
}

/// Pull count and reward sum of one arm.
///
/// The mean is always derived as `sum / pulls`, never stored incrementally.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArmStats {
    pulls: u64,
    sum: ExactSum,
}

impl ArmStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn reward_sum(&self) -> f64 {
        self.sum.value()
    }

    /// The exact accumulator behind [`reward_sum`](Self::reward_sum).
    pub fn exact_sum(&self) -> &ExactSum {
        &self.sum
    }

    /// Empirical mean, `None` while the arm is unpulled.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then(|| self.sum.value() / self.pulls as f64)
    }

    /// Records a reward known to lie in `[-bound, bound]`.
    pub fn record(&mut self, reward: f64, bound: f64) -> Result<(), BanditError> {
        if !(reward.abs() <= bound) {
            return Err(BanditError::RewardOutOfBounds { reward, bound });
        }
        self.push(reward);
        Ok(())
    }

    /// Records a reward without a bound check.
    pub fn push(&mut self, reward: f64) {
        self.pulls += 1;
        self.sum.add(reward);
    }
}

/// Value-style counterpart of [`ArmStats::record`].
pub fn update_stats(mut stats: ArmStats, reward: f64, bound: f64) -> Result<ArmStats, BanditError> {
    stats.record(reward, bound)?;
    Ok(stats)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TableError {
    EmptyRow { row: usize },
    InvalidProbability { row: usize, col: usize, value: f64 },
    RowSum { row: usize, sum: f64 },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::EmptyRow { row } => write!(f, "row {row} is empty"),
            TableError::InvalidProbability { row, col, value } => {
                write!(f, "row {row} entry {col} = {value} is not a probability")
            }
            TableError::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
        }
    }
}

/// Per-arm successor distributions `p^i_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransitionTable {
    rows: Vec<Vec<f64>>,
}

impl TransitionTable {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, BanditError> {
        validate_transition_table(&rows).map_err(BanditError::Table)?;
        Ok(Self { rows })
    }

    /// One deterministic successor per arm.
    pub fn deterministic(arms: usize) -> Self {
        Self {
            rows: vec![vec![1.0]; arms],
        }
    }

    pub fn arms(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, arm: usize) -> &[f64] {
        &self.rows[arm]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `K_i` for every arm.
    pub fn branching(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Inverse-CDF lookup of the successor for a uniform draw `u ∈ [0, 1)`.
    pub fn successor(&self, arm: usize, u: f64) -> usize {
        let row = &self.rows[arm];
        let mut cumulative = 0.0;
        for (j, &p) in row.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return j;
            }
        }
        // Rounding left `u` above the accumulated total.
        row.iter().rposition(|&p| p > 0.0).unwrap_or(row.len() - 1)
    }

    pub fn sample<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> usize {
        self.successor(arm, rng.gen::<f64>())
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransitionTable {
    type Error = BanditError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::new(rows)
    }
}

impl From<TransitionTable> for Vec<Vec<f64>> {
    fn from(table: TransitionTable) -> Self {
        table.rows
    }
}

/// Checks every row and reports all violations, not just the first.
pub fn validate_transition_table(rows: &[Vec<f64>]) -> Result<(), Vec<TableError>> {
    let mut errors = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.is_empty() {
            errors.push(TableError::EmptyRow { row: i });
            continue;
        }
        let mut row_ok = true;
        for (j, &p) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                errors.push(TableError::InvalidProbability {
                    row: i,
                    col: j,
                    value: p,
                });
                row_ok = false;
            }
        }
        let sum: f64 = row.iter().sum();
        if row_ok && (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            errors.push(TableError::RowSum { row: i, sum });
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Constants `(β, ξ, η)` of the polynomial concentration assumption together
/// with the reward bound `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionParams {
    beta: f64,
    xi: f64,
    eta: f64,
    reward_bound: f64,
}

impl AssumptionParams {
    pub fn new(beta: f64, xi: f64, eta: f64, reward_bound: f64) -> Result<Self, BanditError> {
        let mut problems = Vec::new();
        if !(beta > 1.0) {
            problems.push(format!("beta = {beta} must exceed 1"));
        }
        if !(xi > 0.0) || !xi.is_finite() {
            problems.push(format!("xi = {xi} must be positive and finite"));
        }
        if !(0.5..1.0).contains(&eta) {
            problems.push(format!("eta = {eta} must lie in [1/2, 1)"));
        }
        if !(reward_bound > 0.0) || !reward_bound.is_finite() {
            problems.push(format!("reward bound {reward_bound} must be positive"));
        }
        if problems.is_empty() {
            Ok(Self {
                beta,
                xi,
                eta,
                reward_bound,
            })
        } else {
            Err(BanditError::InvalidAssumption(problems.join("; ")))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn reward_bound(&self) -> f64 {
        self.reward_bound
    }
}

/// Bounded reward sequence attached to one successor state.
///
/// Each kind has a closed-form limit of its expected running mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RewardProcess {
    /// `hi` with probability `p`, otherwise `lo`.
    BernoulliScaled {
        p: f64,
        lo: f64,
        hi: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Constant {
        value: f64,
    },
    /// Deterministic sequence `limit · (1 − decay^s)` for the `s`-th draw.
    Drift {
        limit: f64,
        decay: f64,
    },
}

impl RewardProcess {
    pub fn constant(value: f64) -> Self {
        RewardProcess::Constant { value }
    }

    pub fn bernoulli(p: f64, lo: f64, hi: f64) -> Self {
        RewardProcess::BernoulliScaled { p, lo, hi }
    }

    /// Rejects parameters that are malformed or can leave `[-bound, bound]`.
    pub fn validate(&self, bound: f64) -> Result<(), BanditError> {
        let within = |x: f64| x.is_finite() && x.abs() <= bound;
        let ok = match *self {
            RewardProcess::BernoulliScaled { p, lo, hi } => (0.0..=1.0).contains(&p) && within(lo) && within(hi),
            RewardProcess::Uniform { lo, hi } => within(lo) && within(hi) && lo <= hi,
            RewardProcess::Constant { value } => within(value),
            RewardProcess::Drift { limit, decay } => within(limit) && (0.0..1.0).contains(&decay),
        };
        if ok {
            Ok(())
        } else {
            Err(BanditError::InvalidProcess(format!(
                "{self:?} is not a valid process bounded by {bound}"
            )))
        }
    }

    /// The limit `μ` of the expected running mean.
    pub fn limit_mean(&self) -> f64 {
        match *self {
            RewardProcess::BernoulliScaled { p, lo, hi } => p * hi + (1.0 - p) * lo,
            RewardProcess::Uniform { lo, hi } => 0.5 * (lo + hi),
            RewardProcess::Constant { value } => value,
            RewardProcess::Drift { limit, .. } => limit,
        }
    }

    /// Draws the `count`-th reward (1-based), clamped to `[-bound, bound]`.
    pub fn sample<R: Rng + ?Sized>(&self, count: u64, bound: f64, rng: &mut R) -> f64 {
        let raw = match *self {
            RewardProcess::BernoulliScaled { p, lo, hi } => {
                if rng.gen::<f64>() < p {
                    hi
                } else {
                    lo
                }
            }
            RewardProcess::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
            RewardProcess::Constant { value } => value,
            RewardProcess::Drift { limit, decay } => {
                let exponent = i32::try_from(count).unwrap_or(i32::MAX);
                limit * (1.0 - decay.powi(exponent))
            }
        };
        raw.clamp(-bound, bound)
    }
}

/// Free-function form of [`RewardProcess::limit_mean`].
pub fn limit_mean(process: &RewardProcess) -> f64 {
    process.limit_mean()
}

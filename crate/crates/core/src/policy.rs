//! Upper confidence bound selection with a polynomial exploration bonus
//! `B(t, s) = β^{1/ξ} · t^{α/ξ} · s^{η−1}`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandit::ArmStats;

/// Scores closer than this are treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplorationParams {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub eta: f64,
}

impl ExplorationParams {
    pub fn new(alpha: f64, beta: f64, xi: f64, eta: f64) -> Self {
        Self { alpha, beta, xi, eta }
    }

    /// The hyperparameters used for the FrozenLake experiments:
    /// `η = 1/2`, `α/ξ = 1/4` and `β^{1/ξ} = 2`, i.e. `B(t, s) = 2 √(√t / s)`.
    pub fn practical() -> Self {
        Self::new(1.0, 16.0, 4.0, 0.5)
    }

    /// `β^{1/ξ}`.
    pub fn scale(&self) -> f64 {
        self.beta.powf(1.0 / self.xi)
    }

    /// `α/ξ`.
    pub fn time_exponent(&self) -> f64 {
        self.alpha / self.xi
    }
}

impl Default for ExplorationParams {
    fn default() -> Self {
        Self::practical()
    }
}

/// Exploration bonus for an arm pulled `s` times at time `t`.
///
/// Unpulled arms get `+∞`. The product is evaluated in log space whenever one
/// of its factors leaves the finite positive range.
pub fn exploration_bonus(t: u64, s: u64, params: &ExplorationParams) -> f64 {
    if s == 0 {
        return f64::INFINITY;
    }
    let scale = params.scale();
    let time_term = (t as f64).powf(params.time_exponent());
    let count_term = (s as f64).powf(params.eta - 1.0);
    let direct = scale * time_term * count_term;
    let factors_ok = [scale, time_term, count_term].iter().all(|f| f.is_finite() && *f > 0.0);
    if factors_ok && direct.is_finite() {
        return direct;
    }
    let log =
        params.beta.ln() / params.xi + params.time_exponent() * (t as f64).ln() + (params.eta - 1.0) * (s as f64).ln();
    log.exp()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("cannot select from an empty set of arms")]
    NoArms,
}

/// Picks `argmax_i mean_i + B(t, T_i)`, breaking ties uniformly with `rng`.
///
/// `t` is `1 + Σ pulls`, so the first selection happens at `t = 1`.
pub fn select_arm<R: Rng + ?Sized>(
    stats: &[ArmStats],
    t: u64,
    params: &ExplorationParams,
    rng: &mut R,
) -> Result<usize, PolicyError> {
    if stats.is_empty() {
        return Err(PolicyError::NoArms);
    }
    let unpulled: Vec<usize> = (0..stats.len()).filter(|&i| stats[i].pulls() == 0).collect();
    if !unpulled.is_empty() {
        return Ok(pick(&unpulled, rng));
    }
    let scores: Vec<f64> = stats
        .iter()
        .map(|a| a.mean().unwrap_or(0.0) + exploration_bonus(t, a.pulls(), params))
        .collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = (0..scores.len())
        .filter(|&i| scores[i] >= best - TIE_TOLERANCE)
        .collect();
    Ok(pick(&tied, rng))
}

fn pick<R: Rng + ?Sized>(candidates: &[usize], rng: &mut R) -> usize {
    if candidates.len() == 1 {
        candidates[0]
    } else {
        candidates[rng.gen_range(0..candidates.len())]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationMode {
    /// Every constraint required for the concentration guarantee.
    Strict,
    /// Only a finite positive bonus scale and time exponent.
    Practical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ParamViolation {
    AlphaNotAboveTwo { alpha: f64 },
    AlphaBelowLowerBound { alpha: f64, lower: f64 },
    AlphaNotBelowUpperBound { alpha: f64, upper: f64 },
    BetaNotAboveOne { beta: f64 },
    XiNotPositive { xi: f64 },
    EtaOutOfRange { eta: f64 },
    ScaleNotPositiveFinite { scale: f64 },
    TimeExponentNotPositiveFinite { exponent: f64 },
    EtaNotFinite { eta: f64 },
}

impl ParamViolation {
    pub fn name(&self) -> &'static str {
        match self {
            ParamViolation::AlphaNotAboveTwo { .. } => "alpha > 2",
            ParamViolation::AlphaBelowLowerBound { .. } => "alpha >= xi*eta*(1-eta)",
            ParamViolation::AlphaNotBelowUpperBound { .. } => "alpha < xi*(1-eta)",
            ParamViolation::BetaNotAboveOne { .. } => "beta > 1",
            ParamViolation::XiNotPositive { .. } => "xi > 0",
            ParamViolation::EtaOutOfRange { .. } => "1/2 <= eta < 1",
            ParamViolation::ScaleNotPositiveFinite { .. } => "beta^(1/xi) finite and positive",
            ParamViolation::TimeExponentNotPositiveFinite { .. } => "alpha/xi finite and positive",
            ParamViolation::EtaNotFinite { .. } => "eta finite",
        }
    }
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violated {}: {:?}", self.name(), self)
    }
}

pub fn validate_params(params: &ExplorationParams, mode: ValidationMode) -> Result<(), Vec<ParamViolation>> {
    let ExplorationParams { alpha, beta, xi, eta } = *params;
    let mut v = Vec::new();
    match mode {
        ValidationMode::Strict => {
            if !(beta > 1.0) {
                v.push(ParamViolation::BetaNotAboveOne { beta });
            }
            if !(xi > 0.0 && xi.is_finite()) {
                v.push(ParamViolation::XiNotPositive { xi });
            }
            if !(0.5..1.0).contains(&eta) {
                v.push(ParamViolation::EtaOutOfRange { eta });
            }
            if !(alpha > 2.0) {
                v.push(ParamViolation::AlphaNotAboveTwo { alpha });
            }
            let lower = xi * eta * (1.0 - eta);
            if !(alpha >= lower) {
                v.push(ParamViolation::AlphaBelowLowerBound { alpha, lower });
            }
            let upper = xi * (1.0 - eta);
            if !(alpha < upper) {
                v.push(ParamViolation::AlphaNotBelowUpperBound { alpha, upper });
            }
        }
        ValidationMode::Practical => {
            let scale = params.scale();
            if !(scale.is_finite() && scale > 0.0) {
                v.push(ParamViolation::ScaleNotPositiveFinite { scale });
            }
            let exponent = params.time_exponent();
            if !(exponent.is_finite() && exponent > 0.0) {
                v.push(ParamViolation::TimeExponentNotPositiveFinite { exponent });
            }
            if !eta.is_finite() {
                v.push(ParamViolation::EtaNotFinite { eta });
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

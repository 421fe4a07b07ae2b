//! Concentration constants of the polynomial UCB bound.
//!
//! Given leaf-level constants `(β, ξ, η)` of a bandit with stochastic
//! transitions, the transition layer yields `β′ = β 2^{ξ+2} R^ξ K̃^{ξ+1}` with
//! `ξ′ = ξ`, `η′ = η`, and the selection layer then yields the root triple
//! `(β″, ξ″, η″)` together with the helper quantities `c₁`, `c₂`, `N_p` and
//! `A(t)`. Chaining that step reproduces the layer-by-layer induction from
//! the leaves of a search tree up to its root.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policy::{validate_params, ExplorationParams, ParamViolation, ValidationMode};

/// Value used wherever a constant must be strictly greater than one.
pub const BETA_FLOOR: f64 = 1.0 + 1e-9;

/// Default upper end of the `N_p` scan.
pub const DEFAULT_SCAN_CAP: u64 = 10_000_000;

/// Margin below which `α` is not considered to exceed 2 by `pick_alpha`.
const ALPHA_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstantsError {
    #[error("invalid layer constants: {0}")]
    InvalidLayer(String),
    #[error("invalid problem shape: {0}")]
    InvalidShape(String),
    #[error("exploration parameters violate the strict regime: {}", names(.0))]
    Params(Vec<ParamViolation>),
    #[error("{quantity} is not finite; the resulting bound is vacuous")]
    VacuousBound { quantity: &'static str },
    #[error("no N_p satisfies both constraints for t <= {cap}")]
    NpNotFound { cap: u64 },
    #[error("no admissible alpha for xi = {xi}, eta = {eta}: need xi*(1-eta) > max(2, xi*eta*(1-eta))")]
    Infeasible { xi: f64, eta: f64 },
    #[error("layer chain expects one shape per alpha, got {shapes} shapes and {alphas} alphas")]
    ChainLength { shapes: usize, alphas: usize },
    #[error("induction step {step} failed: {source}")]
    Chain {
        step: usize,
        #[source]
        source: Box<ConstantsError>,
    },
}

fn names(v: &[ParamViolation]) -> String {
    v.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
}

/// One `(β, ξ, η)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LayerConstants {
    pub beta: f64,
    pub xi: f64,
    pub eta: f64,
}

impl LayerConstants {
    pub fn new(beta: f64, xi: f64, eta: f64) -> Result<Self, ConstantsError> {
        let layer = Self { beta, xi, eta };
        layer.check()?;
        Ok(layer)
    }

    fn check(&self) -> Result<(), ConstantsError> {
        let mut problems = Vec::new();
        if !(self.beta > 1.0) {
            problems.push(format!("beta = {} must exceed 1", self.beta));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            problems.push(format!("xi = {} must be positive and finite", self.xi));
        }
        if !(0.5..1.0).contains(&self.eta) {
            problems.push(format!("eta = {} must lie in [1/2, 1)", self.eta));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConstantsError::InvalidLayer(problems.join("; ")))
        }
    }
}

/// Reward bound, arm count, successor counts and optimality gap of one layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemShape {
    pub reward_bound: f64,
    pub arms: usize,
    pub branching: Vec<usize>,
    pub delta_min: f64,
}

impl ProblemShape {
    pub fn new(reward_bound: f64, branching: Vec<usize>, delta_min: f64) -> Result<Self, ConstantsError> {
        let shape = Self {
            reward_bound,
            arms: branching.len(),
            branching,
            delta_min,
        };
        shape.check()?;
        Ok(shape)
    }

    fn check(&self) -> Result<(), ConstantsError> {
        let mut problems = Vec::new();
        if !(self.reward_bound > 0.0 && self.reward_bound.is_finite()) {
            problems.push(format!("R = {} must be positive", self.reward_bound));
        }
        if self.arms == 0 {
            problems.push("K must be at least 1".to_string());
        }
        if self.branching.len() != self.arms {
            problems.push(format!(
                "{} branching entries for K = {}",
                self.branching.len(),
                self.arms
            ));
        }
        if self.branching.contains(&0) {
            problems.push("every K_i must be at least 1".to_string());
        }
        if !(self.delta_min > 0.0 && self.delta_min <= 2.0 * self.reward_bound) {
            problems.push(format!("delta_min = {} must lie in (0, 2R]", self.delta_min));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConstantsError::InvalidShape(problems.join("; ")))
        }
    }

    /// `max_i K_i`.
    pub fn max_branching(&self) -> usize {
        self.branching.iter().copied().max().unwrap_or(1)
    }
}

/// Root-level constants obtained from one layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub alpha: f64,
    pub eta_dd: f64,
    pub xi_dd: f64,
    pub beta_dd: f64,
    pub beta_prime: f64,
    pub c1: f64,
    pub c2: f64,
    pub np: u64,
    pub a_np: u64,
}

impl DerivedConstants {
    pub fn root_layer(&self) -> LayerConstants {
        LayerConstants {
            beta: self.beta_dd,
            xi: self.xi_dd,
            eta: self.eta_dd,
        }
    }

    /// `min(1, β″ / z^{ξ″})`.
    pub fn tail_bound(&self, z: f64) -> f64 {
        (self.beta_dd / z.powf(self.xi_dd)).min(1.0)
    }
}

fn finite(value: f64, quantity: &'static str) -> Result<f64, ConstantsError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConstantsError::VacuousBound { quantity })
    }
}

/// `β′ = β · 2^{ξ+2} · R^ξ · (max_i K_i)^{ξ+1}`.
pub fn beta_prime(layer: &LayerConstants, shape: &ProblemShape) -> Result<f64, ConstantsError> {
    layer.check()?;
    shape.check()?;
    let xi = layer.xi;
    let value =
        layer.beta * 2f64.powf(xi + 2.0) * shape.reward_bound.powf(xi) * (shape.max_branching() as f64).powf(xi + 1.0);
    finite(value, "beta_prime")
}

/// `(2/Δ_min · β′^{1/ξ})^{1/(1−η)}`, the `t`-independent factor of `A(t)`.
fn a_base(intermediate: &LayerConstants, delta_min: f64) -> Result<f64, ConstantsError> {
    let inner = 2.0 / delta_min * intermediate.beta.powf(1.0 / intermediate.xi);
    finite(inner.powf(1.0 / (1.0 - intermediate.eta)), "A(t)")
}

fn a_exponent(intermediate: &LayerConstants, alpha: f64) -> f64 {
    alpha / (intermediate.xi * (1.0 - intermediate.eta))
}

fn ceil_count(x: f64) -> Result<u64, ConstantsError> {
    // 2^63 keeps the value exactly representable both as f64 and u64.
    if !x.is_finite() || x >= 9.223_372_036_854_776e18 {
        return Err(ConstantsError::VacuousBound { quantity: "A(t)" });
    }
    Ok(x.ceil().max(0.0) as u64)
}

/// `A(t) = ⌈(2/Δ_min · β′^{1/ξ})^{1/(1−η)} · t^{α/(ξ(1−η))}⌉`.
///
/// `intermediate` carries `β′` in its `beta` field.
pub fn a_of_t(t: u64, intermediate: &LayerConstants, delta_min: f64, alpha: f64) -> Result<u64, ConstantsError> {
    intermediate.check()?;
    let base = a_base(intermediate, delta_min)?;
    ceil_count(base * (t as f64).powf(a_exponent(intermediate, alpha)))
}

/// Smallest `t ∈ [1, scan_cap]` with `t ≥ max{1, A(t)}` and
/// `t ≤ (2R(3 + A(t) − 4K))^{1/η}`.
///
/// The power in the second constraint is the real power function, so a
/// non-positive base makes the constraint unsatisfiable at that `t`.
pub fn compute_np(
    layer: &LayerConstants,
    shape: &ProblemShape,
    alpha: f64,
    scan_cap: u64,
) -> Result<u64, ConstantsError> {
    let intermediate = LayerConstants {
        beta: beta_prime(layer, shape)?,
        ..*layer
    };
    let base = a_base(&intermediate, shape.delta_min)?;
    let exponent = a_exponent(&intermediate, alpha);
    let r = shape.reward_bound;
    let k = shape.arms as f64;

    // Below base^{1/(1-e)} the first constraint fails outright, since there
    // A(t) >= base * t^e > t. Start slightly under that point.
    let mut start = 1u64;
    if exponent < 1.0 {
        let lower = base.powf(1.0 / (1.0 - exponent)) * (1.0 - 1e-6);
        if lower.is_finite() && lower > 1.0 {
            if lower >= scan_cap as f64 {
                return Err(ConstantsError::NpNotFound { cap: scan_cap });
            }
            start = lower.floor() as u64;
        }
    }
    for t in start..=scan_cap {
        let a = match ceil_count(base * (t as f64).powf(exponent)) {
            Ok(a) => a,
            // A(t) only grows from here on, so t >= A(t) can no longer hold.
            Err(_) => break,
        };
        if np_constraints_hold(t, a, r, k, intermediate.eta) {
            return Ok(t);
        }
    }
    Err(ConstantsError::NpNotFound { cap: scan_cap })
}

fn np_constraints_hold(t: u64, a: u64, r: f64, k: f64, eta: f64) -> bool {
    if t < a.max(1) {
        return false;
    }
    let base = 2.0 * r * (3.0 + a as f64 - 4.0 * k);
    base > 0.0 && (t as f64) <= base.powf(1.0 / eta)
}

/// `(η″, ξ″) = (α / (ξ(1−η)), α − 1)`; neither depends on the problem shape.
pub fn root_exponents(layer: &LayerConstants, alpha: f64) -> (f64, f64) {
    (a_exponent(layer, alpha), alpha - 1.0)
}

/// Root constants `(β″, ξ″, η″)` plus every helper quantity.
pub fn root_constants(
    layer: &LayerConstants,
    shape: &ProblemShape,
    alpha: f64,
    scan_cap: u64,
) -> Result<DerivedConstants, ConstantsError> {
    layer.check()?;
    shape.check()?;
    let params = ExplorationParams::new(alpha, layer.beta, layer.xi, layer.eta);
    validate_params(&params, ValidationMode::Strict).map_err(ConstantsError::Params)?;

    let beta_prime = beta_prime(layer, shape)?;
    let intermediate = LayerConstants {
        beta: beta_prime,
        ..*layer
    };
    let r = shape.reward_bound;
    let k = shape.arms as f64;
    let (exponent, xi_dd) = root_exponents(layer, alpha);

    let c1 = finite(2.0 * r * k * a_base(&intermediate, shape.delta_min)?, "c1")?;
    let np = compute_np(layer, shape, alpha, scan_cap)?;
    let a_np = a_of_t(np, &intermediate, shape.delta_min, alpha)?;
    let c2 = finite(2.0 * r * ((np - 1) as f64).powf(1.0 - exponent), "c2")?;

    let tail_term = 2.0 * (k - 1.0) / ((alpha - 1.0) * (1.0 + a_np as f64).powf(alpha - 1.0));
    let inner = beta_prime.max(tail_term);
    let beta_dd = finite(c2.max(2.0 * c1.powf(alpha - 1.0) * inner), "beta_dd")?;

    Ok(DerivedConstants {
        alpha,
        eta_dd: exponent,
        xi_dd,
        beta_dd: beta_dd.max(BETA_FLOOR),
        beta_prime,
        c1,
        c2,
        np,
        a_np,
    })
}

/// A `β^H` that makes bounded i.i.d. leaf rewards satisfy the concentration
/// assumption: `max(R^ξ ξ^{ξ/2} e^{−ξ/2}, 1 + 1e−9)`.
pub fn leaf_beta(reward_bound: f64, xi: f64) -> f64 {
    let value = reward_bound.powf(xi) * xi.powf(xi / 2.0) * (-xi / 2.0).exp();
    value.max(BETA_FLOOR)
}

/// A `β_T` for the concentration of successor counts:
/// `max(ξ^{ξ/2} 2^{−ξ} e^{−ξ/2}, 1 + 1e−9)`.
pub fn lemma_beta_t(xi: f64) -> f64 {
    let value = xi.powf(xi / 2.0) * 2f64.powf(-xi) * (-xi / 2.0).exp();
    value.max(BETA_FLOOR)
}

/// Applies [`root_constants`] once per layer, from the leaves to the root.
///
/// `shapes[k]` and `alphas[k]` describe the `k`-th step. The result starts
/// with `leaf` and ends with the root triple.
pub fn propagate_layers(
    leaf: &LayerConstants,
    shapes: &[ProblemShape],
    alphas: &[f64],
    scan_cap: u64,
) -> Result<Vec<LayerConstants>, ConstantsError> {
    if shapes.len() != alphas.len() {
        return Err(ConstantsError::ChainLength {
            shapes: shapes.len(),
            alphas: alphas.len(),
        });
    }
    leaf.check()?;
    let mut chain = vec![*leaf];
    for (step, (shape, &alpha)) in shapes.iter().zip(alphas).enumerate() {
        let current = chain[chain.len() - 1];
        let derived = root_constants(&current, shape, alpha, scan_cap).map_err(|e| ConstantsError::Chain {
            step,
            source: Box::new(e),
        })?;
        chain.push(derived.root_layer());
    }
    Ok(chain)
}

/// Midpoint of `[max(2 + 1e−6, ξη(1−η)), ξ(1−η))`.
pub fn pick_alpha(xi: f64, eta: f64) -> Result<f64, ConstantsError> {
    if !(xi > 0.0) || !(0.5..1.0).contains(&eta) {
        return Err(ConstantsError::InvalidLayer(format!(
            "xi = {xi}, eta = {eta} outside xi > 0, 1/2 <= eta < 1"
        )));
    }
    let lower = (2.0 + ALPHA_MARGIN).max(xi * eta * (1.0 - eta));
    let upper = xi * (1.0 - eta);
    if upper <= lower {
        return Err(ConstantsError::Infeasible { xi, eta });
    }
    Ok(0.5 * (lower + upper))
}

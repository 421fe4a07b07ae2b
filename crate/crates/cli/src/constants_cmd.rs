//! The bound calculator: `β′`, `η″`, `ξ″`, `β″` and helpers for one layer.

use serde::Serialize;

use polyuct::constants::{
    beta_prime, pick_alpha, root_constants, root_exponents, ConstantsError, LayerConstants, ProblemShape,
    DEFAULT_SCAN_CAP,
};
use polyuct::policy::{validate_params, ExplorationParams, ValidationMode};

use crate::config::{pick, AlphaChoice, FileConfig};
use crate::{CliError, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsInput {
    pub reward_bound: f64,
    pub branching: Vec<usize>,
    pub delta_min: f64,
    pub beta: f64,
    pub xi: f64,
    pub eta: f64,
    pub alpha: AlphaChoice,
    pub scan_cap: u64,
}

impl ConstantsInput {
    #[allow(clippy::too_many_arguments)]
    pub fn resolve(
        reward_bound: Option<f64>,
        branching: Option<Vec<usize>>,
        delta_min: Option<f64>,
        beta: Option<f64>,
        xi: Option<f64>,
        eta: Option<f64>,
        alpha: Option<AlphaChoice>,
        scan_cap: Option<u64>,
        file: &FileConfig,
    ) -> Self {
        Self {
            reward_bound: pick(reward_bound, file.reward_bound, 1.0),
            branching: pick(branching, file.branching.clone(), vec![1, 1]),
            delta_min: pick(delta_min, file.delta_min, 1.0),
            beta: pick(beta, file.beta, 2.0),
            xi: pick(xi, file.xi, 16.0),
            eta: pick(eta, file.eta, 0.5),
            alpha: pick(alpha, file.alpha, AlphaChoice::Auto),
            scan_cap: pick(scan_cap, file.scan_cap, DEFAULT_SCAN_CAP),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: &'static str,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &'static str, message: String) -> Self {
        Self {
            severity: "error",
            code,
            message,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaRange {
    /// `max(2, ξη(1−η))`; `α` must exceed 2 strictly.
    pub lower: f64,
    /// `ξ(1−η)`, exclusive.
    pub upper: f64,
    pub nonempty: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub inputs: ConstantsInput,
    pub alpha: Option<f64>,
    pub alpha_source: &'static str,
    pub alpha_range: AlphaRange,
    pub beta_prime: Option<f64>,
    pub eta_dd: Option<f64>,
    pub xi_dd: Option<f64>,
    pub beta_dd: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub np: Option<u64>,
    pub a_np: Option<u64>,
    pub feasible: bool,
    pub diagnostics: Vec<Diagnostic>,
}

fn code(e: &ConstantsError) -> &'static str {
    match e {
        ConstantsError::InvalidLayer(_) => "invalid_layer",
        ConstantsError::InvalidShape(_) => "invalid_shape",
        ConstantsError::Params(_) => "strict_violation",
        ConstantsError::VacuousBound { .. } => "vacuous_bound",
        ConstantsError::NpNotFound { .. } => "np_not_found",
        ConstantsError::Infeasible { .. } => "infeasible_alpha",
        ConstantsError::ChainLength { .. } | ConstantsError::Chain { .. } => "chain",
    }
}

pub fn compute(input: ConstantsInput) -> ConstantsReport {
    let mut diagnostics = Vec::new();
    let mut push = |e: &ConstantsError| diagnostics.push(Diagnostic::error(code(e), e.to_string()));

    let lower = 2f64.max(input.xi * input.eta * (1.0 - input.eta));
    let upper = input.xi * (1.0 - input.eta);
    let alpha_range = AlphaRange {
        lower,
        upper,
        nonempty: upper > lower,
    };

    let layer = LayerConstants::new(input.beta, input.xi, input.eta)
        .map_err(|e| push(&e))
        .ok();
    let shape = ProblemShape::new(input.reward_bound, input.branching.clone(), input.delta_min)
        .map_err(|e| push(&e))
        .ok();

    let (alpha, alpha_source) = match input.alpha {
        AlphaChoice::Value(a) => (Some(a), "given"),
        AlphaChoice::Auto => (pick_alpha(input.xi, input.eta).map_err(|e| push(&e)).ok(), "auto"),
    };

    let beta_prime = match (&layer, &shape) {
        (Some(l), Some(s)) => beta_prime(l, s).map_err(|e| push(&e)).ok(),
        _ => None,
    };
    let (eta_dd, xi_dd) = match (&layer, alpha) {
        (Some(l), Some(a)) => {
            let (e, x) = root_exponents(l, a);
            (Some(e), Some(x))
        }
        _ => (None, None),
    };

    let mut report = ConstantsReport {
        inputs: input.clone(),
        alpha,
        alpha_source,
        alpha_range,
        beta_prime,
        eta_dd,
        xi_dd,
        beta_dd: None,
        c1: None,
        c2: None,
        np: None,
        a_np: None,
        feasible: false,
        diagnostics: Vec::new(),
    };

    if let (Some(l), Some(s), Some(a), Some(_)) = (&layer, &shape, alpha, beta_prime) {
        let params = ExplorationParams::new(a, l.beta, l.xi, l.eta);
        match validate_params(&params, ValidationMode::Strict) {
            Err(v) => push(&ConstantsError::Params(v)),
            Ok(()) => match root_constants(l, s, a, input.scan_cap) {
                Ok(d) => {
                    report.beta_dd = Some(d.beta_dd);
                    report.c1 = Some(d.c1);
                    report.c2 = Some(d.c2);
                    report.np = Some(d.np);
                    report.a_np = Some(d.a_np);
                    report.feasible = true;
                }
                Err(e) => push(&e),
            },
        }
    }
    report.diagnostics = diagnostics;
    report
}

pub fn constants(input: ConstantsInput) -> Result<Report, CliError> {
    let report = compute(input);
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Run(e.to_string()))?;
    text.push('\n');
    Ok(Report {
        text,
        has_errors: !report.diagnostics.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(xi: f64, eta: f64, alpha: AlphaChoice) -> ConstantsInput {
        ConstantsInput::resolve(
            None,
            None,
            None,
            None,
            Some(xi),
            Some(eta),
            Some(alpha),
            None,
            &FileConfig::default(),
        )
    }

    #[test]
    fn exponents_for_alpha_four() {
        let r = compute(input(16.0, 0.5, AlphaChoice::Value(4.0)));
        assert_eq!(r.eta_dd, Some(0.5));
        assert_eq!(r.xi_dd, Some(3.0));
        assert!(r.feasible, "{:?}", r.diagnostics);
    }

    #[test]
    fn auto_alpha_infeasible() {
        let r = compute(input(4.0, 0.5, AlphaChoice::Auto));
        assert!(!r.feasible);
        assert_eq!(r.alpha, None);
        assert_eq!(r.diagnostics[0].code, "infeasible_alpha");
    }

    #[test]
    fn beta_prime_pass_through() {
        let i = input(16.0, 0.5, AlphaChoice::Auto);
        let expected = beta_prime(
            &LayerConstants::new(i.beta, i.xi, i.eta).unwrap(),
            &ProblemShape::new(i.reward_bound, i.branching.clone(), i.delta_min).unwrap(),
        )
        .unwrap();
        assert_eq!(compute(i).beta_prime, Some(expected));
    }
}

//! Parameter formulas for the pinning parameter `q` and the temperature.
//!
//! * SCA flips at least as many spins per update as Glauber, for every
//!   configuration, when `2q ≤ log|V| - βK̄`.
//! * The SCA equilibrium is ε-close to Gibbs (order preservation) when
//!   `2q ≥ log|V| + βK̄ - log(ε√v / 2K̄)`.
//! * Both hold for some `q` iff `β ≤ log(ε√v / 2K̄) / 2K̄`.
//!
//! All three are sufficient conditions only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{compute_constants, IsingModel, ModelConstants};

/// Default closeness tolerance, one percent of the energy range.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Upper bound on `q` for spin-flip dominance: `(log|V| - βK̄) / 2`.
///
/// May be nonpositive, in which case no admissible `q` exists.
pub fn q_upper_flips(constants: &ModelConstants, n_vertices: usize, beta: f64) -> f64 {
    ((n_vertices as f64).ln() - beta * constants.k_bar) / 2.0
}

/// Lower bound on `q` for ε-closeness:
/// `(log|V| + βK̄ - log(ε√v / 2K̄)) / 2`.
pub fn q_lower_close(constants: &ModelConstants, n_vertices: usize, beta: f64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_nondegenerate(constants)?;
    let log_ratio = closeness_log_ratio(constants, epsilon);
    Ok(((n_vertices as f64).ln() + beta * constants.k_bar - log_ratio) / 2.0)
}

/// `log(ε√v / 2K̄) / 2K̄`, or `None` when that is not positive.
pub fn beta_ceiling(constants: &ModelConstants, epsilon: f64) -> Result<Option<f64>> {
    check_epsilon(epsilon)?;
    if constants.k_bar == 0.0 {
        return Err(Error::Degenerate("K̄ = 0: the Hamiltonian is constant"));
    }
    let log_ratio = closeness_log_ratio(constants, epsilon);
    Ok((log_ratio > 0.0).then(|| log_ratio / (2.0 * constants.k_bar)))
}

fn closeness_log_ratio(constants: &ModelConstants, epsilon: f64) -> f64 {
    (epsilon * constants.v.sqrt() / (2.0 * constants.k_bar)).ln()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

fn check_nondegenerate(constants: &ModelConstants) -> Result<()> {
    if constants.v == 0.0 || constants.k_bar == 0.0 {
        return Err(Error::Degenerate(
            "all couplings and fields vanish, so every measure is 0-close",
        ));
    }
    Ok(())
}

/// All bounds for one `(β, ε)` together with the admissible `q` interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPlan {
    pub n_vertices: usize,
    pub beta: f64,
    pub epsilon: f64,
    pub k_bar: f64,
    pub v: f64,
    pub q_max_flips: f64,
    pub q_min_close: f64,
    pub beta_max: Option<f64>,
    /// `[max(q_min_close, 0), q_max_flips]` when nonempty.
    pub feasible: Option<[f64; 2]>,
    pub recommended_q: Option<f64>,
    /// How `recommended_q` was picked from the interval.
    pub q_rule: String,
}

impl ParameterPlan {
    pub fn is_feasible(&self) -> bool {
        self.feasible.is_some()
    }
}

pub fn plan(model: &IsingModel, beta: f64, epsilon: f64) -> Result<ParameterPlan> {
    let constants = compute_constants(model, false)?;
    plan_from_constants(&constants, model.n_vertices(), beta, epsilon)
}

pub fn plan_from_constants(
    constants: &ModelConstants,
    n_vertices: usize,
    beta: f64,
    epsilon: f64,
) -> Result<ParameterPlan> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and nonnegative, got {beta}"
        )));
    }
    let q_max_flips = q_upper_flips(constants, n_vertices, beta);
    let q_min_close = q_lower_close(constants, n_vertices, beta, epsilon)?;
    let beta_max = beta_ceiling(constants, epsilon)?;
    let feasible = (q_min_close <= q_max_flips && q_max_flips > 0.0).then(|| [q_min_close.max(0.0), q_max_flips]);
    Ok(ParameterPlan {
        n_vertices,
        beta,
        epsilon,
        k_bar: constants.k_bar,
        v: constants.v,
        q_max_flips,
        q_min_close,
        beta_max,
        feasible,
        recommended_q: feasible.map(|[lo, hi]| 0.5 * (lo + hi)),
        q_rule: "midpoint".into(),
    })
}

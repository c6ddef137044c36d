//! Stepwise rank-1 decompositions `X = sum_alpha a_alpha b_alpha' / delta_alpha`.
//!
//! Three methods share the deflation scheme `X_{alpha+1} = X_alpha - a b' / delta`:
//!
//! * [`FactorMethod::SvdL2`]: power iteration on the l2 transition formulas.
//! * [`FactorMethod::TaxicabSvd`]: sign power iteration on the l1 transition
//!   formulas `a = X sgn(b)`, `b = X' sgn(a)`, maximizing `||X u||_1` over sign
//!   vectors `u`.
//! * [`FactorMethod::L1MinSvd`]: alternating weighted-median regressions of the
//!   rows and the columns, minimizing `||X - a b'/delta||_1`.
//!
//! Every emitted [`FactorStep`] is normalized so that
//! `||a||_p = ||b||_p = delta`.

mod accounting;
mod l1min;
mod power;
mod sign_power;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    lp_norm, matrix_entrywise_norm, norming_functional, NormOrder, RealMatrix, RealVector,
};
use crate::tolerance::RANK_TOL;

pub use accounting::{norm_accounting, AccountingKind, NormAccounting, StepCheck};
pub use l1min::{l1_fit_objective, l1min_alternate};
pub use sign_power::{tsvd_exhaustive_oracle, OracleResult, MAX_ORACLE_COLS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorMethod {
    SvdL2,
    TaxicabSvd,
    L1MinSvd,
}

impl FactorMethod {
    pub fn norm(self) -> NormOrder {
        match self {
            FactorMethod::SvdL2 => NormOrder::L2,
            FactorMethod::TaxicabSvd | FactorMethod::L1MinSvd => NormOrder::L1,
        }
    }
}

/// How the Taxicab iterations are started. Also used for the Taxicab start
/// of [`FactorMethod::L1MinSvd`]; ignored by [`FactorMethod::SvdL2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InitStrategy {
    /// One run per nonzero column, keeping the largest `delta`.
    #[default]
    AllColumns,
    /// A single run from the column of largest l1 norm.
    DominantColumn,
    /// Start from the exact maximizer found by enumeration (needs `cols <= 20`).
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorOptions {
    pub strategy: InitStrategy,
    /// Relative stopping tolerance (power iteration and alternation).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            strategy: InitStrategy::AllColumns,
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// One rank-1 term `a b' / delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorStep {
    pub delta: f64,
    pub a: RealVector,
    pub b: RealVector,
    pub iterations: usize,
    pub converged: bool,
    pub start_label: String,
    /// l1-min only: objective after every half-sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objective_trace: Vec<f64>,
    /// l1-min only: `(||a_raw||_1, ||b_raw||_1)` of the alternation output
    /// written as `a_raw b_raw' / delta` before balancing; their product is `delta^2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_norms: Option<(f64, f64)>,
}

impl FactorStep {
    pub fn ensure_converged(&self) -> Result<&Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations,
            })
        }
    }

    /// The rank-1 matrix `a b' / delta`.
    pub fn term(&self) -> Result<RealMatrix> {
        RealMatrix::outer(&self.a, &self.b, 1.0 / self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// All `k` requested steps were extracted.
    Completed,
    /// The residual fell below `1e-10 ||X||_p`.
    RankReached,
    /// The factor at this (0-based) step collapsed and was dropped.
    DegenerateFactor { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub method: FactorMethod,
    pub steps: Vec<FactorStep>,
    /// `||X_alpha||_p` for `alpha = 1..=steps+1`, starting with `||X||_p`.
    pub residual_trace: Vec<f64>,
    /// `||X - sum a b'/delta||_p`, recomputed from the steps.
    pub reconstruction_error: f64,
    pub residual: RealMatrix,
    pub termination: Termination,
}

impl Decomposition {
    pub fn deltas(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.delta).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.termination == Termination::RankReached
    }

    /// `sum_alpha a_alpha b_alpha' / delta_alpha`.
    pub fn reconstruct(&self) -> Result<RealMatrix> {
        let (rows, cols) = self.residual.shape();
        let mut sum = RealMatrix::zeros(rows, cols)?;
        for step in &self.steps {
            sum = sum.sub_outer(&step.a, &step.b, -1.0 / step.delta)?;
        }
        Ok(sum)
    }
}

/// One half-iteration of the transition formulas:
/// `a = X phi(b)`, `b_next = X' phi(a)`, `delta = phi(a)' X phi(b) = ||a||_p`.
pub fn transition_step(
    x: &RealMatrix,
    b: &RealVector,
    p: NormOrder,
) -> Result<(RealVector, RealVector, f64)> {
    if b.len() != x.cols() {
        return Err(Error::DimensionMismatch {
            expected: x.cols(),
            found: b.len(),
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }
    let a = x.mul_vec(&norming_functional(b, p)?)?;
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    let b_next = x.tr_mul_vec(&norming_functional(&a, p)?)?;
    let delta = lp_norm(&a, p);
    Ok((a, b_next, delta))
}

/// Extracts the first rank-1 factor of `x`.
///
/// A run that hits `max_iter` is still returned, with `converged = false`.
pub fn first_factor(x: &RealMatrix, method: FactorMethod, options: &FactorOptions) -> Result<FactorStep> {
    if x.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    match method {
        FactorMethod::SvdL2 => power::dominant_triple(x, options),
        FactorMethod::TaxicabSvd => sign_power::taxicab_factor(x, options),
        FactorMethod::L1MinSvd => l1min::l1min_factor(x, options),
    }
}

/// `X - a b' / delta`.
pub fn deflate(x: &RealMatrix, step: &FactorStep) -> Result<RealMatrix> {
    if step.a.len() != x.rows() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: step.a.len(),
        });
    }
    if step.b.len() != x.cols() {
        return Err(Error::DimensionMismatch {
            expected: x.cols(),
            found: step.b.len(),
        });
    }
    if step.delta.is_nan() || step.delta <= 0.0 {
        return Err(Error::DegenerateFactor);
    }
    x.sub_outer(&step.a, &step.b, 1.0 / step.delta)
}

/// Extracts up to `k` factors by repeated [`first_factor`] and [`deflate`].
///
/// Stops early once the residual is below `1e-10 ||X||_p`, or when a factor
/// collapses (possible for l1-min); see [`Decomposition::termination`].
pub fn decompose(
    x: &RealMatrix,
    method: FactorMethod,
    k: usize,
    options: &FactorOptions,
) -> Result<Decomposition> {
    let max = x.rows().min(x.cols());
    if k == 0 || k > max {
        return Err(Error::InvalidRank { k, max });
    }
    if x.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let p = method.norm();
    let total = matrix_entrywise_norm(x, p);
    let rank_floor = RANK_TOL * total;

    let mut residual = x.clone();
    let mut trace = vec![total];
    let mut steps = Vec::with_capacity(k);
    let mut termination = Termination::Completed;

    for alpha in 0..k {
        if matrix_entrywise_norm(&residual, p) <= rank_floor {
            break;
        }
        match first_factor(&residual, method, options) {
            Ok(step) => {
                residual = deflate(&residual, &step)?;
                trace.push(matrix_entrywise_norm(&residual, p));
                steps.push(step);
            }
            Err(Error::DegenerateFactor | Error::ZeroVector) => {
                termination = Termination::DegenerateFactor { step: alpha };
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if termination == Termination::Completed && matrix_entrywise_norm(&residual, p) <= rank_floor {
        termination = Termination::RankReached;
    }

    let mut d = Decomposition {
        method,
        steps,
        residual_trace: trace,
        reconstruction_error: 0.0,
        residual,
        termination,
    };
    d.reconstruction_error = matrix_entrywise_norm(&x.sub(&d.reconstruct()?)?, p);
    Ok(d)
}

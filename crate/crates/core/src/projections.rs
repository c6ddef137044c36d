//! Point-onto-point regressions in l2 and l1, the weighted median solver, the
//! Hadamard coefficient form of a fit and the Pythagorean verdicts.
//!
//! Three ways of regressing `y` on `x` are offered:
//!
//! * [`project_euclidean`]: `alpha = x'y / ||x||_2^2`, the orthogonal projection.
//! * [`project_l1_operator`]: `alpha = sgn(x)'y / ||x||_1`, the l1 projection
//!   operator `Q_x = x sgn(x)' / ||x||_1` applied to `y`.
//! * [`project_l1_min`]: `alpha = argmin ||y - alpha x||_1`, a weighted median
//!   of the ratios `y_i / x_i` with weights `|x_i|`.
//!
//! Every result carries a [`PythagoreanVerdict`] that compares `||y||` with the
//! sum of the fitted and residual terms (squared norms for l2, plain norms
//! for l1).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    dot, lp_norm, norming_functional, sign, sign_vector, NormOrder, RealVector,
};
use crate::tolerance::{verdict_band, DEPENDENCE_TOL, REL_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectionMethod {
    Euclidean,
    L1Operator,
    L1Min,
}

impl ProjectionMethod {
    pub fn norm(self) -> NormOrder {
        match self {
            ProjectionMethod::Euclidean => NormOrder::L2,
            ProjectionMethod::L1Operator | ProjectionMethod::L1Min => NormOrder::L1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Equality,
    StrictInequality,
}

/// Outcome of comparing `||y||` against the two terms of a decomposition of `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PythagoreanVerdict {
    pub norm: NormOrder,
    pub relation: Relation,
    /// `||y||_2^2` or `||y||_1`.
    pub lhs: f64,
    /// `fit_term + residual_term`.
    pub rhs: f64,
    pub fit_term: f64,
    pub residual_term: f64,
    /// Every valid coefficient on a coordinate with `y_i != 0` lies in `[0, 1]`.
    pub b_in_unit_interval: bool,
}

impl fmt::Display for PythagoreanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relation {
            Relation::Equality => write!(
                f,
                "equality: {} = {} + {}",
                self.lhs, self.fit_term, self.residual_term
            ),
            Relation::StrictInequality => write!(
                f,
                "strict inequality: {} < {} + {}",
                self.lhs, self.fit_term, self.residual_term
            ),
        }
    }
}

/// Coefficients `b` with `fitted = b ∘ y`, plus a per-entry validity flag.
///
/// An entry is invalid where `y_i = 0` but `fitted_i != 0`; no coefficient can
/// reproduce the fit there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HadamardCoefficients {
    pub values: RealVector,
    pub valid: Vec<bool>,
}

impl HadamardCoefficients {
    pub fn all_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub method: ProjectionMethod,
    pub alpha: f64,
    pub fitted: RealVector,
    pub residual: RealVector,
    pub b_coeffs: HadamardCoefficients,
    pub verdict: PythagoreanVerdict,
}

/// The verdict a corollary predicts next to the one actually computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryOutcome {
    pub predicted: Relation,
    pub verdict: PythagoreanVerdict,
}

impl CorollaryOutcome {
    pub fn agrees(&self) -> bool {
        self.predicted == self.verdict.relation
    }
}

/// Minimizer of `sum_i w_i |v_i - theta|`, always one of the `v_i`.
///
/// Values are sorted, equal values merge their weights and the smallest value
/// whose cumulative weight reaches half the total is returned. When a whole
/// interval of minimizers exists this picks its left end.
pub fn weighted_median(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: values.len(),
            found: weights.len(),
        });
    }
    let mut pairs = Vec::with_capacity(values.len());
    for (index, (&v, &w)) in values.iter().zip(weights).enumerate() {
        if !v.is_finite() || !w.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if w < 0.0 {
            return Err(Error::NegativeWeight { index, weight: w });
        }
        pairs.push((v, w));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
    for (v, w) in pairs {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }
    let total: f64 = merged.iter().map(|p| p.1).sum();
    if total <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    let mut cumulative = 0.0;
    for &(v, w) in &merged {
        cumulative += w;
        if 2.0 * cumulative >= total {
            return Ok(v);
        }
    }
    // cumulative reaches total on the last entry
    Ok(merged[merged.len() - 1].0)
}

/// `sum_i w_i |v_i - theta|`.
pub fn weighted_abs_deviation(values: &[f64], weights: &[f64], theta: f64) -> f64 {
    values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - theta).abs())
        .sum()
}

/// `||y - alpha x||_1`.
pub fn l1_objective(y: &RealVector, x: &RealVector, alpha: f64) -> f64 {
    y.iter().zip(x.iter()).map(|(yi, xi)| (yi - alpha * xi).abs()).sum()
}

fn check_regressor(y: &RealVector, x: &RealVector) -> Result<()> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: x.len(),
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// The projection operator `Q_x y = (x / ||x||_p) phi(x)'y`.
pub fn projection_operator(x: &RealVector, y: &RealVector, p: NormOrder) -> Result<RealVector> {
    check_regressor(y, x)?;
    let phi = norming_functional(x, p)?;
    let coeff = phi.dot(y)? / lp_norm(x, p);
    Ok(x.scaled(coeff))
}

/// `b_i = fitted_i / y_i` where `y_i != 0`, else `0`.
pub fn b_coefficients(fitted: &RealVector, y: &RealVector) -> Result<HadamardCoefficients> {
    if fitted.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: fitted.len(),
        });
    }
    let mut values = Vec::with_capacity(y.len());
    let mut valid = Vec::with_capacity(y.len());
    for (&f, &yi) in fitted.iter().zip(y.iter()) {
        if yi != 0.0 {
            values.push(f / yi);
            valid.push(true);
        } else {
            values.push(0.0);
            valid.push(f == 0.0);
        }
    }
    Ok(HadamardCoefficients {
        values: RealVector::new(values)?,
        valid,
    })
}

fn unit_interval(y: &RealVector, b: &RealVector, valid: Option<&[bool]>) -> bool {
    y.iter().zip(b.iter()).enumerate().all(|(i, (&yi, &bi))| {
        let counted = yi != 0.0 && valid.is_none_or(|v| v[i]);
        !counted || (-REL_TOL..=1.0 + REL_TOL).contains(&bi)
    })
}

fn classify(lhs: f64, fit_term: f64, residual_term: f64) -> Result<Relation> {
    let rhs = fit_term + residual_term;
    let band = verdict_band(rhs);
    if (lhs - rhs).abs() <= band {
        Ok(Relation::Equality)
    } else if rhs - lhs > band {
        Ok(Relation::StrictInequality)
    } else {
        Err(Error::Indeterminate { lhs, rhs })
    }
}

fn verdict(
    p: NormOrder,
    y: &RealVector,
    fit: &RealVector,
    rest: &RealVector,
    b_in_unit_interval: bool,
) -> Result<PythagoreanVerdict> {
    let lhs = p.power(lp_norm(y, p));
    let fit_term = p.power(lp_norm(fit, p));
    let residual_term = p.power(lp_norm(rest, p));
    Ok(PythagoreanVerdict {
        norm: p,
        relation: classify(lhs, fit_term, residual_term)?,
        lhs,
        rhs: fit_term + residual_term,
        fit_term,
        residual_term,
        b_in_unit_interval,
    })
}

/// Compares `||y||` with `||b∘y|| + ||(1-b)∘y||` (both squared for `L2`).
///
/// For `L2` equality holds iff `((1-b)∘y)'(b∘y) = 0`; for `L1` iff every
/// `b_i` with `y_i != 0` lies in `[0, 1]`. A left side exceeding the right
/// by more than the dead band (possible only for `L2`, when the cross term is
/// positive) is reported as [`Error::Indeterminate`].
pub fn pythagorean_check(y: &RealVector, b: &RealVector, p: NormOrder) -> Result<PythagoreanVerdict> {
    if y.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            found: b.len(),
        });
    }
    let fit = RealVector::new(y.iter().zip(b.iter()).map(|(yi, bi)| bi * yi).collect())?;
    let rest = RealVector::new(
        y.iter()
            .zip(b.iter())
            .map(|(yi, bi)| (1.0 - bi) * yi)
            .collect(),
    )?;
    verdict(p, y, &fit, &rest, unit_interval(y, b, None))
}

fn finish(
    method: ProjectionMethod,
    y: &RealVector,
    x: &RealVector,
    alpha: f64,
) -> Result<ProjectionResult> {
    let fitted = x.scaled(alpha);
    let residual = y.sub(&fitted)?;
    let b_coeffs = b_coefficients(&fitted, y)?;
    let in_unit = unit_interval(y, &b_coeffs.values, Some(&b_coeffs.valid));
    let verdict = verdict(method.norm(), y, &fitted, &residual, in_unit)?;
    Ok(ProjectionResult {
        method,
        alpha,
        fitted,
        residual,
        b_coeffs,
        verdict,
    })
}

/// Orthogonal regression of `y` on `x`.
pub fn project_euclidean(y: &RealVector, x: &RealVector) -> Result<ProjectionResult> {
    check_regressor(y, x)?;
    let xs = x.as_slice();
    let alpha = dot(xs, y.as_slice()) / dot(xs, xs);
    finish(ProjectionMethod::Euclidean, y, x, alpha)
}

/// Regression of `y` on `x` by the l1 projection operator.
pub fn project_l1_operator(y: &RealVector, x: &RealVector) -> Result<ProjectionResult> {
    check_regressor(y, x)?;
    let alpha = sign_vector(x).dot(y)? / lp_norm(x, NormOrder::L1);
    finish(ProjectionMethod::L1Operator, y, x, alpha)
}

/// Least absolute deviation regression of `y` on `x`.
///
/// Coordinates with `x_i = 0` add the constant `|y_i|` to the objective and
/// are left out of the median.
pub fn project_l1_min(y: &RealVector, x: &RealVector) -> Result<ProjectionResult> {
    check_regressor(y, x)?;
    let alpha = l1_min_coefficient(y.as_slice(), x.as_slice())?;
    finish(ProjectionMethod::L1Min, y, x, alpha)
}

/// `argmin_theta sum_i |y_i - theta x_i|` over the coordinates with `x_i != 0`.
pub(crate) fn l1_min_coefficient(y: &[f64], x: &[f64]) -> Result<f64> {
    let (ratios, weights): (Vec<f64>, Vec<f64>) = y
        .iter()
        .zip(x)
        .filter(|(_, &xi)| xi != 0.0)
        .map(|(&yi, &xi)| (yi / xi, xi.abs()))
        .unzip();
    if ratios.is_empty() {
        return Err(Error::ZeroVector);
    }
    weighted_median(&ratios, &weights)
}

pub fn project(y: &RealVector, x: &RealVector, method: ProjectionMethod) -> Result<ProjectionResult> {
    match method {
        ProjectionMethod::Euclidean => project_euclidean(y, x),
        ProjectionMethod::L1Operator => project_l1_operator(y, x),
        ProjectionMethod::L1Min => project_l1_min(y, x),
    }
}

/// The relation the corollaries state for linearly independent `x` and `y`.
pub fn predicted_relation(x: &RealVector, y: &RealVector, method: ProjectionMethod) -> Relation {
    match method {
        ProjectionMethod::Euclidean => Relation::Equality,
        ProjectionMethod::L1Operator => Relation::StrictInequality,
        ProjectionMethod::L1Min => {
            let same = x.iter().zip(y.iter()).all(|(&a, &b)| sign(a) == sign(b));
            if same {
                Relation::Equality
            } else {
                Relation::StrictInequality
            }
        }
    }
}

/// Projects `y` on `x` and pairs the computed verdict with the predicted one.
///
/// The prediction is stated for linearly independent vectors, so a zero
/// residual is reported as [`Error::LinearlyDependent`]. The two can still
/// disagree on inputs the statements do not cover, for example when
/// `sgn(x) = -sgn(y)`, when a coordinate of `x` vanishes while `y`'s does not,
/// or when `sgn(x)'y = 0` for the operator projection.
pub fn corollary_classify(
    x: &RealVector,
    y: &RealVector,
    method: ProjectionMethod,
) -> Result<CorollaryOutcome> {
    let result = project(y, x, method)?;
    let p = method.norm();
    if lp_norm(&result.residual, p) <= DEPENDENCE_TOL * lp_norm(y, p) {
        return Err(Error::LinearlyDependent);
    }
    Ok(CorollaryOutcome {
        predicted: predicted_relation(x, y, method),
        verdict: result.verdict,
    })
}

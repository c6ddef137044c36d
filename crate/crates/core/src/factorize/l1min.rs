use crate::error::{Error, Result};
use crate::linalg::{lp_norm, NormOrder, RealMatrix, RealVector};
use crate::projections::l1_min_coefficient;

use super::{sign_power, FactorOptions, FactorStep};

/// `sum_ij |x_ij - a_i b_j|`, summed row by row.
pub fn l1_fit_objective(x: &RealMatrix, a: &RealVector, b: &RealVector) -> f64 {
    (0..x.rows())
        .map(|i| {
            x.row(i)
                .iter()
                .zip(b.iter())
                .map(|(xij, bj)| (xij - a[i] * bj).abs())
                .sum::<f64>()
        })
        .sum()
}

fn regress_rows(x: &RealMatrix, b: &RealVector) -> Result<RealVector> {
    let a = (0..x.rows())
        .map(|i| l1_min_coefficient(x.row(i), b.as_slice()))
        .collect::<Result<Vec<f64>>>()?;
    RealVector::new(a)
}

fn regress_cols(x: &RealMatrix, a: &RealVector) -> Result<RealVector> {
    let b = (0..x.cols())
        .map(|j| l1_min_coefficient(&x.col(j), a.as_slice()))
        .collect::<Result<Vec<f64>>>()?;
    RealVector::new(b)
}

/// Alternating l1 regressions for the best rank-1 fit `a b'` in entrywise l1.
///
/// Each sweep sets `a_i` to the weighted median of `x_ij / b_j` (weights
/// `|b_j|`, over `b_j != 0`), then `b_j` likewise against `a`, then rescales
/// `b` to unit l1 norm. It stops when a sweep lowers the objective by at most
/// `tol (1 + objective)`, or after `max_iter` sweeps.
///
/// The converged fit `F = a b'` is returned as `a* b*' / delta` with
/// `delta = ||F||_1 = ||a||_1 ||b||_1`, `a* = ||b||_1 a` and `b* = ||a||_1 b`,
/// so `||a*||_1 = ||b*||_1 = delta`.
pub fn l1min_alternate(
    x: &RealMatrix,
    b0: &RealVector,
    tol: f64,
    max_iter: usize,
) -> Result<FactorStep> {
    if b0.len() != x.cols() {
        return Err(Error::DimensionMismatch {
            expected: x.cols(),
            found: b0.len(),
        });
    }
    if b0.is_zero() {
        return Err(Error::ZeroVector);
    }
    let degenerate = |e: Error| match e {
        Error::ZeroVector => Error::DegenerateFactor,
        other => other,
    };

    let mut b = b0.scaled(1.0 / lp_norm(b0, NormOrder::L1));
    let mut a;
    let mut trace = Vec::new();
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    loop {
        iterations += 1;
        a = regress_rows(x, &b)?;
        if a.is_zero() {
            return Err(Error::DegenerateFactor);
        }
        trace.push(l1_fit_objective(x, &a, &b));
        b = regress_cols(x, &a).map_err(degenerate)?;
        if b.is_zero() {
            return Err(Error::DegenerateFactor);
        }
        let objective = l1_fit_objective(x, &a, &b);
        trace.push(objective);

        let scale = lp_norm(&b, NormOrder::L1);
        b = b.scaled(1.0 / scale);
        a = a.scaled(scale);

        if objective == 0.0 || previous - objective <= tol * (1.0 + objective) {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        previous = objective;
    }

    let a_norm = lp_norm(&a, NormOrder::L1);
    let b_norm = lp_norm(&b, NormOrder::L1);
    let delta = a_norm * b_norm;
    Ok(FactorStep {
        delta,
        a: a.scaled(b_norm),
        b: b.scaled(a_norm),
        iterations,
        converged,
        start_label: String::new(),
        objective_trace: trace,
        // a_raw = a, b_raw = delta b
        raw_norms: Some((a_norm, delta * b_norm)),
    })
}

fn dominant_row(x: &RealMatrix) -> usize {
    (0..x.rows())
        .map(|i| (i, lp_norm(&x.row_vector(i), NormOrder::L1)))
        .fold((0, f64::NEG_INFINITY), |acc, r| if r.1 > acc.1 { r } else { acc })
        .0
}

/// First l1-min factor, started from the Taxicab factor's `b`.
pub(super) fn l1min_factor(x: &RealMatrix, options: &FactorOptions) -> Result<FactorStep> {
    let (b0, label) = match sign_power::taxicab_factor(x, options) {
        Ok(step) => (step.b, format!("tsvd/{}", step.start_label)),
        Err(Error::TooLarge { .. } | Error::ZeroVector) => {
            let i = dominant_row(x);
            (x.row_vector(i), format!("dominant-row:{}", i + 1))
        }
        Err(e) => return Err(e),
    };
    let mut step = l1min_alternate(x, &b0, options.tol, options.max_iter)?;
    step.start_label = label;
    Ok(step)
}

use crate::error::{Error, Result};
use crate::linalg::{lp_norm, NormOrder, RealMatrix, RealVector};

use super::{transition_step, FactorOptions, FactorStep};

fn column_with_largest_norm(x: &RealMatrix, p: NormOrder) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for j in 0..x.cols() {
        let n = lp_norm(&x.col_vector(j), p);
        if n > best.1 {
            best = (j, n);
        }
    }
    best.0
}

fn unit(v: &RealVector) -> RealVector {
    v.scaled(1.0 / lp_norm(v, NormOrder::L2))
}

/// Dominant singular triple by power iteration on the l2 transition formulas.
///
/// Starts from the column of largest l2 norm. Stops when both the relative
/// change of `delta` and the sup-norm change of the unit right vector fall
/// below `tol`. The returned step is rebuilt from the final left direction
/// `u` as `b = X'u`, `delta = ||b||_2`, `a = delta u`, which makes
/// `u'(X - a b'/delta) = 0` hold to rounding.
pub(super) fn dominant_triple(x: &RealMatrix, options: &FactorOptions) -> Result<FactorStep> {
    let j = column_with_largest_norm(x, NormOrder::L2);
    let start = x.col_vector(j);
    let mut b = x.tr_mul_vec(&unit(&start))?;
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }

    let mut delta = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    let mut a = start;
    while iterations < options.max_iter {
        iterations += 1;
        let (a_next, b_next, d) = transition_step(x, &b, NormOrder::L2)?;
        let moved = unit(&b_next)
            .sub(&unit(&b))?
            .max_abs();
        let settled = (d - delta).abs() <= options.tol * d;
        a = a_next;
        b = b_next;
        delta = d;
        if settled && moved <= options.tol {
            converged = true;
            break;
        }
    }

    let u = unit(&a);
    let b = x.tr_mul_vec(&u)?;
    let delta = lp_norm(&b, NormOrder::L2);
    if delta == 0.0 {
        return Err(Error::DegenerateFactor);
    }
    Ok(FactorStep {
        delta,
        a: u.scaled(delta),
        b,
        iterations,
        converged,
        start_label: format!("col:{}", j + 1),
        objective_trace: Vec::new(),
        raw_norms: None,
    })
}

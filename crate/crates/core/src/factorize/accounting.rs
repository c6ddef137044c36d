//! Norm bookkeeping for a finished decomposition.
//!
//! For the classical SVD the column, row and total energies split exactly
//! over the factors; for the l1 methods only the triangle inequality is
//! available. Whatever the residual still holds is added to the factor side,
//! so partial runs are accounted for as well.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{NormOrder, RealMatrix};
use crate::tolerance::{approx_eq, ABS_FLOOR, REL_TOL};

use super::{deflate, Decomposition, FactorMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccountingKind {
    /// `||X||_2^2 = sum delta^2 + ||R||_2^2`, and likewise per row and column.
    EnergyIdentity,
    /// `||X||_1 <= sum delta + ||R||_1`, and likewise per row and column.
    L1Inequality,
}

/// The triangle inequality `||X_alpha||^p <= ||a b'||^p / delta^p + ||X_{alpha+1}||^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub lhs: f64,
    pub fit_term: f64,
    pub residual_term: f64,
    pub holds: bool,
    /// Reported only; equality is not required.
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormAccounting {
    pub method: FactorMethod,
    pub kind: AccountingKind,
    pub complete: bool,
    /// `||X(,j)||_p^p`.
    pub column_lhs: Vec<f64>,
    /// `sum_alpha |b_alpha(j)|^p + ||R(,j)||_p^p`.
    pub column_rhs: Vec<f64>,
    pub row_lhs: Vec<f64>,
    pub row_rhs: Vec<f64>,
    /// `||X||_p^p`.
    pub total_lhs: f64,
    /// `sum_alpha delta_alpha^p`.
    pub total_delta: f64,
    /// `||R||_p^p` of the final residual.
    pub residual_term: f64,
    /// `total_delta + residual_term - total_lhs`; positive when the l1
    /// inequality is strict.
    pub margin: f64,
    pub holds: bool,
    pub steps: Vec<StepCheck>,
}

impl NormAccounting {
    /// Fails with [`Error::MethodMismatch`] unless this is a complete classical
    /// SVD run, the only case where the exact energy identities apply.
    pub fn require_identity(&self) -> Result<&Self> {
        if self.kind == AccountingKind::EnergyIdentity && self.complete {
            Ok(self)
        } else {
            Err(Error::MethodMismatch)
        }
    }
}

/// `sum |v_i|^p`, without the rounding of a root and a power.
fn power_sum(v: &[f64], p: NormOrder) -> f64 {
    match p {
        NormOrder::L1 => v.iter().map(|x| x.abs()).sum(),
        NormOrder::L2 => v.iter().map(|x| x * x).sum(),
    }
}

fn at_most(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + REL_TOL * rhs.abs() + ABS_FLOOR
}

fn relation_holds(kind: AccountingKind, lhs: f64, rhs: f64) -> bool {
    match kind {
        AccountingKind::EnergyIdentity => approx_eq(lhs, rhs),
        AccountingKind::L1Inequality => at_most(lhs, rhs),
    }
}

pub fn norm_accounting(x: &RealMatrix, d: &Decomposition) -> Result<NormAccounting> {
    if x.shape() != d.residual.shape() {
        return Err(Error::DimensionMismatch {
            expected: x.rows() * x.cols(),
            found: d.residual.rows() * d.residual.cols(),
        });
    }
    let p = d.method.norm();
    let kind = match d.method {
        FactorMethod::SvdL2 => AccountingKind::EnergyIdentity,
        FactorMethod::TaxicabSvd | FactorMethod::L1MinSvd => AccountingKind::L1Inequality,
    };
    let entry_pow = |v: f64| match p {
        NormOrder::L1 => v.abs(),
        NormOrder::L2 => v * v,
    };
    let r = &d.residual;

    let column_lhs: Vec<f64> = (0..x.cols()).map(|j| power_sum(&x.col(j), p)).collect();
    let row_lhs: Vec<f64> = (0..x.rows()).map(|i| power_sum(x.row(i), p)).collect();
    let mut column_rhs: Vec<f64> = (0..x.cols()).map(|j| power_sum(&r.col(j), p)).collect();
    let mut row_rhs: Vec<f64> = (0..x.rows()).map(|i| power_sum(r.row(i), p)).collect();
    for step in &d.steps {
        for (c, bj) in column_rhs.iter_mut().zip(step.b.iter()) {
            *c += entry_pow(*bj);
        }
        for (c, ai) in row_rhs.iter_mut().zip(step.a.iter()) {
            *c += entry_pow(*ai);
        }
    }

    let total_lhs = power_sum(x.entries(), p);
    let total_delta: f64 = d.steps.iter().map(|s| p.power(s.delta)).sum();
    let residual_term = power_sum(r.entries(), p);

    let mut steps = Vec::with_capacity(d.steps.len());
    let mut current = x.clone();
    for step in &d.steps {
        let next = deflate(&current, step)?;
        let lhs = power_sum(current.entries(), p);
        let fit_term = power_sum(step.term()?.entries(), p);
        let residual_term = power_sum(next.entries(), p);
        let rhs = fit_term + residual_term;
        steps.push(StepCheck {
            lhs,
            fit_term,
            residual_term,
            holds: at_most(lhs, rhs),
            equality: approx_eq(lhs, rhs),
        });
        current = next;
    }

    let holds = relation_holds(kind, total_lhs, total_delta + residual_term)
        && column_lhs
            .iter()
            .zip(&column_rhs)
            .chain(row_lhs.iter().zip(&row_rhs))
            .all(|(l, r)| relation_holds(kind, *l, *r))
        && steps.iter().all(|s| s.holds);

    Ok(NormAccounting {
        method: d.method,
        kind,
        complete: d.is_complete(),
        column_lhs,
        column_rhs,
        row_lhs,
        row_rhs,
        total_lhs,
        total_delta,
        residual_term,
        margin: total_delta + residual_term - total_lhs,
        holds,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::{decompose, FactorOptions};

    #[test]
    fn diagonal_energy_identity() {
        let x = RealMatrix::diagonal(&[3.0, 1.0]).unwrap();
        let d = decompose(&x, FactorMethod::SvdL2, 2, &FactorOptions::default()).unwrap();
        let acc = norm_accounting(&x, &d).unwrap();
        assert_eq!(acc.total_lhs, 10.0);
        assert_eq!(acc.total_delta, 10.0);
        assert!(acc.holds);
        assert!(acc.require_identity().is_ok());
        assert_eq!(acc.column_rhs, vec![9.0, 1.0]);
        assert_eq!(acc.row_rhs, vec![9.0, 1.0]);
    }

    #[test]
    fn taxicab_runs_have_no_identity() {
        let x = RealMatrix::diagonal(&[3.0, 1.0]).unwrap();
        let d = decompose(&x, FactorMethod::TaxicabSvd, 2, &FactorOptions::default()).unwrap();
        let acc = norm_accounting(&x, &d).unwrap();
        assert!(acc.holds);
        // disjoint supports: the inequality is tight
        assert_eq!(acc.margin, 0.0);
        assert_eq!(acc.require_identity().err(), Some(Error::MethodMismatch));
    }

    #[test]
    fn partial_svd_run_is_not_an_identity_report() {
        let x = RealMatrix::diagonal(&[3.0, 1.0]).unwrap();
        let d = decompose(&x, FactorMethod::SvdL2, 1, &FactorOptions::default()).unwrap();
        let acc = norm_accounting(&x, &d).unwrap();
        assert!(acc.holds);
        assert_eq!(acc.residual_term, 1.0);
        assert_eq!(acc.require_identity().err(), Some(Error::MethodMismatch));
    }

    #[test]
    fn shape_mismatch() {
        let x = RealMatrix::diagonal(&[3.0, 1.0]).unwrap();
        let d = decompose(&x, FactorMethod::SvdL2, 1, &FactorOptions::default()).unwrap();
        let y = RealMatrix::zeros(3, 2).unwrap();
        assert!(matches!(norm_accounting(&y, &d), Err(Error::DimensionMismatch { .. })));
    }
}

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lp_norm, sign_vector, NormOrder, RealMatrix, RealVector};

use super::{transition_step, FactorOptions, FactorStep, InitStrategy};

/// Largest column count accepted by [`tsvd_exhaustive_oracle`].
pub const MAX_ORACLE_COLS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// `max ||X u||_1` over `u` in `{-1, +1}^J`.
    pub delta: f64,
    /// The first maximizer in enumeration order, with `u_1 = +1`.
    pub signs: RealVector,
}

/// Exact Taxicab dispersion of `x` by enumerating half of `{-1, +1}^J`.
pub fn tsvd_exhaustive_oracle(x: &RealMatrix) -> Result<OracleResult> {
    let cols = x.cols();
    if cols > MAX_ORACLE_COLS {
        return Err(Error::TooLarge {
            cols,
            max: MAX_ORACLE_COLS,
        });
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut u = vec![1.0; cols];
    for mask in 0u32..(1u32 << (cols - 1)) {
        for (j, s) in u.iter_mut().enumerate().skip(1) {
            *s = if mask & (1 << (j - 1)) != 0 { -1.0 } else { 1.0 };
        }
        let signs = RealVector::from_slice(&u)?;
        let value = lp_norm(&x.mul_vec(&signs)?, NormOrder::L1);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, u.clone()));
        }
    }
    let (delta, signs) = best.expect("at least one sign vector");
    Ok(OracleResult {
        delta,
        signs: RealVector::new(signs)?,
    })
}

struct SignRun {
    a: RealVector,
    b: RealVector,
    delta: f64,
    iterations: usize,
    converged: bool,
}

/// Iterates the l1 transition formulas from `b` until `sgn(b)` is a fixed
/// point, a sign pattern repeats, or `max_iter` is reached.
fn iterate_signs(x: &RealMatrix, mut b: RealVector, max_iter: usize) -> Result<SignRun> {
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let pattern = |v: &RealVector| -> Vec<i8> { v.iter().map(|&s| s as i8).collect() };
    let mut signs = sign_vector(&b);
    seen.insert(pattern(&signs));
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (a, b_next, delta) = transition_step(x, &b, NormOrder::L1)?;
        let next_signs = sign_vector(&b_next);
        let fixed = next_signs == signs;
        if fixed || iterations >= max_iter || !seen.insert(pattern(&next_signs)) {
            return Ok(SignRun {
                a,
                b: b_next,
                delta,
                iterations,
                converged: fixed,
            });
        }
        b = b_next;
        signs = next_signs;
    }
}

fn run_from_column(x: &RealMatrix, j: usize, max_iter: usize) -> Result<Option<SignRun>> {
    let col = x.col_vector(j);
    if col.is_zero() {
        return Ok(None);
    }
    let b = x.tr_mul_vec(&sign_vector(&col))?;
    iterate_signs(x, b, max_iter).map(Some)
}

fn step_from(run: SignRun, label: String) -> FactorStep {
    FactorStep {
        delta: run.delta,
        a: run.a,
        b: run.b,
        iterations: run.iterations,
        converged: run.converged,
        start_label: label,
        objective_trace: Vec::new(),
        raw_norms: None,
    }
}

/// First Taxicab factor. With several starts the largest `delta` wins and
/// ties go to the earliest start.
pub(super) fn taxicab_factor(x: &RealMatrix, options: &FactorOptions) -> Result<FactorStep> {
    let mut best: Option<FactorStep> = None;
    let mut consider = |run: SignRun, label: String| {
        if best.as_ref().is_none_or(|b| run.delta > b.delta) {
            best = Some(step_from(run, label));
        }
    };
    match options.strategy {
        InitStrategy::AllColumns => {
            for j in 0..x.cols() {
                if let Some(run) = run_from_column(x, j, options.max_iter)? {
                    consider(run, format!("col:{}", j + 1));
                }
            }
        }
        InitStrategy::DominantColumn => {
            let j = (0..x.cols())
                .map(|j| (j, lp_norm(&x.col_vector(j), NormOrder::L1)))
                .fold((0, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc })
                .0;
            if let Some(run) = run_from_column(x, j, options.max_iter)? {
                consider(run, format!("dominant-col:{}", j + 1));
            }
        }
        InitStrategy::Exhaustive => {
            let oracle = tsvd_exhaustive_oracle(x)?;
            consider(iterate_signs(x, oracle.signs, options.max_iter)?, "exhaustive".to_string());
        }
    }
    best.ok_or(Error::ZeroMatrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_rank_one() {
        let x = RealMatrix::outer(
            &RealVector::from_slice(&[1.0, 2.0]).unwrap(),
            &RealVector::from_slice(&[3.0, 1.0]).unwrap(),
            1.0,
        )
        .unwrap();
        let res = tsvd_exhaustive_oracle(&x).unwrap();
        assert_eq!(res.delta, 12.0);
        assert_eq!(res.signs.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn oracle_identity_tie_goes_to_first() {
        let res = tsvd_exhaustive_oracle(&RealMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(res.delta, 2.0);
        assert_eq!(res.signs.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn oracle_single_column() {
        let x = RealMatrix::new(3, 1, vec![1.0, -2.0, 0.5]).unwrap();
        assert_eq!(tsvd_exhaustive_oracle(&x).unwrap().delta, 3.5);
    }

    #[test]
    fn oracle_rejects_wide_matrices() {
        let x = RealMatrix::zeros(1, 21).unwrap();
        assert_eq!(
            tsvd_exhaustive_oracle(&x),
            Err(Error::TooLarge { cols: 21, max: 20 })
        );
    }

    #[test]
    fn strategies_agree_on_a_small_matrix() {
        let x = RealMatrix::from_rows(vec![
            vec![0.8, -1.3, 0.4],
            vec![-0.2, 0.9, 1.7],
            vec![1.5, 0.3, -0.6],
            vec![-1.1, -0.7, 0.5],
        ])
        .unwrap();
        let oracle = tsvd_exhaustive_oracle(&x).unwrap();
        for strategy in [InitStrategy::AllColumns, InitStrategy::DominantColumn, InitStrategy::Exhaustive] {
            let opts = FactorOptions { strategy, ..FactorOptions::default() };
            let step = taxicab_factor(&x, &opts).unwrap();
            assert!(step.delta <= oracle.delta, "{strategy:?}");
            assert!(step.converged);
            assert!((lp_norm(&step.b, NormOrder::L1) - step.delta).abs() <= 1e-12 * step.delta);
        }
        let opts = FactorOptions { strategy: InitStrategy::Exhaustive, ..FactorOptions::default() };
        assert_eq!(taxicab_factor(&x, &opts).unwrap().delta, oracle.delta);
    }
}

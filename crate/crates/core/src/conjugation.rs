//! Gram–Schmidt-like conjugation in l1 and l2.
//!
//! Each input vector is passed through `(I - Q_alpha)...(I - Q_1)`, earliest
//! operator first, where `Q_i = y_i phi(y_i)' / ||y_i||_p`. The outputs satisfy
//! `phi(y_beta)'y_alpha = 0` for `alpha > beta`. For p = 1 the operators do not
//! commute, so the order matters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{lp_norm, norming_functional, sign_vector, NormOrder, RealMatrix, RealVector};
use crate::projections::projection_operator;
use crate::tolerance::DEGENERACY_TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugateSet {
    pub order: NormOrder,
    pub vectors: Vec<RealVector>,
    /// `sgn(Y)'Y` for `L1` (lower triangular), `Y'Y` for `L2` (diagonal).
    pub gram: RealMatrix,
}

fn common_len(xs: &[RealVector]) -> Result<usize> {
    let first = xs.first().ok_or(Error::EmptyInput)?;
    let n = first.len();
    if let Some(bad) = xs.iter().find(|x| x.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    Ok(n)
}

/// Conjugates `xs` in order.
///
/// A vector whose conjugated form has norm at most `1e-12` times its input
/// norm depends on its predecessors and is rejected with
/// [`Error::DegenerateVector`].
pub fn conjugate_gram_schmidt(xs: &[RealVector], p: NormOrder) -> Result<ConjugateSet> {
    common_len(xs)?;
    let mut ys: Vec<RealVector> = Vec::with_capacity(xs.len());
    for (index, x) in xs.iter().enumerate() {
        let mut z = x.clone();
        for y in &ys {
            z = z.sub(&projection_operator(y, &z, p)?)?;
        }
        let input_norm = lp_norm(x, p);
        if input_norm == 0.0 || lp_norm(&z, p) <= DEGENERACY_TOL * input_norm {
            return Err(Error::DegenerateVector { index });
        }
        ys.push(z);
    }
    let gram = conjugacy_gram(&ys, p)?;
    Ok(ConjugateSet {
        order: p,
        vectors: ys,
        gram,
    })
}

/// `G[beta][alpha] = sgn(y_beta)'y_alpha` for `L1`, `y_beta'y_alpha` for `L2`.
pub fn conjugacy_gram(set: &[RealVector], p: NormOrder) -> Result<RealMatrix> {
    common_len(set)?;
    let k = set.len();
    let left: Vec<RealVector> = match p {
        NormOrder::L1 => set.iter().map(sign_vector).collect(),
        NormOrder::L2 => set.to_vec(),
    };
    let mut data = Vec::with_capacity(k * k);
    for l in &left {
        for y in set {
            data.push(l.dot(y)?);
        }
    }
    RealMatrix::new(k, k, data)
}

/// Largest `|G[beta][alpha]|` over the strict upper triangle `alpha > beta`.
pub fn max_upper_off_diagonal(gram: &RealMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for beta in 0..gram.rows() {
        for alpha in beta + 1..gram.cols() {
            worst = worst.max(gram.get(beta, alpha).abs());
        }
    }
    worst
}

/// `phi(y_beta)'y_alpha` with the norming functional; for `L2` this rescales
/// the rows of [`conjugacy_gram`] so that the diagonal holds `||y||_2`.
pub fn norming_gram(set: &[RealVector], p: NormOrder) -> Result<RealMatrix> {
    common_len(set)?;
    let k = set.len();
    let mut data = Vec::with_capacity(k * k);
    for l in set {
        let phi = norming_functional(l, p)?;
        for y in set {
            data.push(phi.dot(y)?);
        }
    }
    RealMatrix::new(k, k, data)
}

//! Dense real vectors and matrices, lp norms for p = 1 and 2, sign vectors,
//! norming functionals and Hadamard products.
//!
//! Every container rejects NaN and infinities at construction, so the
//! identities checked downstream can assume finite arithmetic.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The norm order `p`. Only the pairs `(1, inf)` and `(2, 2)` are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormOrder {
    L1,
    L2,
}

impl NormOrder {
    /// The exponent `p`.
    pub fn exponent(self) -> f64 {
        match self {
            NormOrder::L1 => 1.0,
            NormOrder::L2 => 2.0,
        }
    }

    /// The conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual_exponent(self) -> f64 {
        match self {
            NormOrder::L1 => f64::INFINITY,
            NormOrder::L2 => 2.0,
        }
    }

    /// `x^p` for non-negative `x`.
    pub fn power(self, x: f64) -> f64 {
        match self {
            NormOrder::L1 => x,
            NormOrder::L2 => x * x,
        }
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::L1 => f.write_str("l1"),
            NormOrder::L2 => f.write_str("l2"),
        }
    }
}

fn check_finite(entries: &[f64]) -> Result<()> {
    match entries.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// A non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_finite(&entries)?;
        Ok(RealVector(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for the conventional `len`/`is_empty` pair.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    fn check_len(&self, other: &RealVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &RealVector) -> Result<f64> {
        self.check_len(other)?;
        Ok(dot(&self.0, &other.0))
    }

    pub fn scaled(&self, factor: f64) -> RealVector {
        RealVector(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &RealVector) -> Result<RealVector> {
        self.check_len(other)?;
        Ok(RealVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &RealVector) -> Result<RealVector> {
        self.check_len(other)?;
        Ok(RealVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Largest absolute entry (the l-infinity norm).
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealVector::new(v)
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Self {
        v.0
    }
}

/// A dense row-major matrix of finite reals with at least one row and column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyInput);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(RealMatrix { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut m = Self::zeros(n, n)?;
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        check_finite(&m.data)?;
        Ok(m)
    }

    /// The rank-1 matrix `scale * u v'`.
    pub fn outer(u: &RealVector, v: &RealVector, scale: f64) -> Result<Self> {
        let data = u
            .iter()
            .flat_map(|&ui| v.iter().map(move |&vj| ui * vj * scale))
            .collect();
        Self::new(u.len(), v.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vector(&self, i: usize) -> RealVector {
        RealVector(self.row(i).to_vec())
    }

    pub fn col_vector(&self, j: usize) -> RealVector {
        RealVector(self.col(j))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn transpose(&self) -> RealMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            data.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        RealMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `X v`.
    pub fn mul_vec(&self, v: &RealVector) -> Result<RealVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(RealVector(
            self.data
                .chunks(self.cols)
                .map(|row| dot(row, v.as_slice()))
                .collect(),
        ))
    }

    /// `X' v`.
    pub fn tr_mul_vec(&self, v: &RealVector) -> Result<RealVector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![0.0; self.cols];
        for (row, &vi) in self.data.chunks(self.cols).zip(v.iter()) {
            for (o, &x) in out.iter_mut().zip(row) {
                *o += x * vi;
            }
        }
        Ok(RealVector(out))
    }

    /// `X - scale * u v'`.
    pub fn sub_outer(&self, u: &RealVector, v: &RealVector, scale: f64) -> Result<RealMatrix> {
        if u.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: u.len(),
            });
        }
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut data = self.data.clone();
        for (i, row) in data.chunks_mut(self.cols).enumerate() {
            let ui = u[i] * scale;
            for (x, &vj) in row.iter_mut().zip(v.iter()) {
                *x -= ui * vj;
            }
        }
        RealMatrix::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &RealMatrix) -> Result<RealMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                found: other.data.len(),
            });
        }
        Ok(RealMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }
}

impl TryFrom<Vec<Vec<f64>>> for RealMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        RealMatrix::from_rows(rows)
    }
}

impl From<RealMatrix> for Vec<Vec<f64>> {
    fn from(m: RealMatrix) -> Self {
        m.to_rows()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn slice_norm(v: &[f64], p: NormOrder) -> f64 {
    match p {
        NormOrder::L1 => v.iter().map(|x| x.abs()).sum(),
        NormOrder::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

pub(crate) fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `(sum |v_i|^p)^(1/p)`.
pub fn lp_norm(v: &RealVector, p: NormOrder) -> f64 {
    slice_norm(v.as_slice(), p)
}

/// Entrywise sign with `sign(0) = 0`.
pub fn sign_vector(v: &RealVector) -> RealVector {
    RealVector(v.iter().map(|&x| sign(x)).collect())
}

/// The norming functional `phi(v)` in the dual space, with `phi(v)'v = ||v||_p`.
///
/// For `L2` this is `v / ||v||_2`, which needs `v != 0`. For `L1` it is the
/// sign vector, so `phi(0) = 0`.
pub fn norming_functional(v: &RealVector, p: NormOrder) -> Result<RealVector> {
    match p {
        NormOrder::L1 => Ok(sign_vector(v)),
        NormOrder::L2 => {
            let n = lp_norm(v, NormOrder::L2);
            if n == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok(v.scaled(1.0 / n))
        }
    }
}

/// Entrywise product `u ∘ v`.
pub fn hadamard(u: &RealVector, v: &RealVector) -> Result<RealVector> {
    u.check_len(v)?;
    Ok(RealVector(u.iter().zip(v.iter()).map(|(a, b)| a * b).collect()))
}

/// Entrywise p-norm `(sum_ij |x_ij|^p)^(1/p)`.
pub fn matrix_entrywise_norm(x: &RealMatrix, p: NormOrder) -> f64 {
    slice_norm(x.entries(), p)
}

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is zero; its direction is undefined")]
    ZeroVector,
    #[error("matrix is entrywise zero")]
    ZeroMatrix,
    #[error("negative weight {weight} at index {index}")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("all weights are zero")]
    AllZeroWeights,
    #[error("verdict cannot be resolved: lhs {lhs} exceeds rhs {rhs}")]
    Indeterminate { lhs: f64, rhs: f64 },
    #[error("x and y are linearly dependent (residual is zero)")]
    LinearlyDependent,
    #[error("vector {index} collapsed to zero during conjugation")]
    DegenerateVector { index: usize },
    #[error("rank-1 factor collapsed to zero")]
    DegenerateFactor,
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("{cols} columns exceed the exhaustive search limit of {max}")]
    TooLarge { cols: usize, max: usize },
    #[error("rank {k} outside 1..={max}")]
    InvalidRank { k: usize, max: usize },
    #[error("accounting identity needs a complete classical SVD run")]
    MethodMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

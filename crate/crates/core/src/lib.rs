//! Projections, conjugation and stepwise rank-1 decompositions in l1 and l2.
//!
//! The numerical core works on dense [`RealVector`] and [`RealMatrix`] values
//! and is independent of the file formats and the command line, which live in
//! [`io`], [`report`] and [`cli`].

pub mod cli;
pub mod conjugation;
pub mod error;
pub mod factorize;
pub mod io;
pub mod linalg;
pub mod projections;
pub mod report;
pub mod tolerance;

pub use conjugation::{conjugacy_gram, conjugate_gram_schmidt, max_upper_off_diagonal, ConjugateSet};
pub use error::{Error, Result};
pub use factorize::{
    decompose, deflate, first_factor, norm_accounting, transition_step, tsvd_exhaustive_oracle,
    Decomposition, FactorMethod, FactorOptions, FactorStep, InitStrategy, NormAccounting, Termination,
};
pub use linalg::{hadamard, lp_norm, matrix_entrywise_norm, norming_functional, sign_vector, NormOrder, RealMatrix, RealVector};
pub use projections::{
    b_coefficients, corollary_classify, project, project_euclidean, project_l1_min, project_l1_operator,
    projection_operator, pythagorean_check, weighted_median, ProjectionMethod, ProjectionResult,
    PythagoreanVerdict, Relation,
};

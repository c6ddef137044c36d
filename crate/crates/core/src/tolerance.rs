//! Numerical tolerances shared by the verdicts, the decompositions and the
//! verification suite.

/// Relative tolerance for floating point equality of exact identities.
pub const REL_TOL: f64 = 1e-9;

/// Absolute floor applied alongside [`REL_TOL`].
pub const ABS_FLOOR: f64 = 1e-12;

/// A residual counts as zero (linear dependence) below this fraction of `||y||`.
pub const DEPENDENCE_TOL: f64 = 1e-12;

/// A conjugated vector counts as collapsed below this fraction of its input norm.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A decomposition stops once the residual drops below this fraction of `||X||`.
pub const RANK_TOL: f64 = 1e-10;

/// `|a - b| <= REL_TOL * max(|a|, |b|) + ABS_FLOOR`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()) + ABS_FLOOR
}

/// Dead band used when deciding between equality and strict inequality.
pub fn verdict_band(rhs: f64) -> f64 {
    REL_TOL * rhs.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approx_eq_uses_relative_and_absolute_parts() {
        assert!(approx_eq(1.0, 1.0 + 1e-10));
        assert!(!approx_eq(1.0, 1.0 + 1e-8));
        assert!(approx_eq(0.0, 1e-13));
        assert!(!approx_eq(0.0, 1e-11));
        assert!(approx_eq(1e6, 1e6 + 1e-4));
    }
}

//! Numerical thresholds.
//!
//! The `f64` values are the contract. For narrower scalars every threshold is
//! raised to a fixed multiple of machine epsilon so that the checks stay
//! meaningful instead of failing on rounding alone.

use serde::Serialize;

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances<T> {
    /// Relative Frobenius tolerance for the eigen-system identities.
    pub identity: T,
    /// Spectrum is degenerate when `Delta / b^2` or `c / b^2` drops below this.
    pub degeneracy: T,
    /// Absolute tolerance on the separability margin.
    pub separability: T,
    /// Relative tolerance on the deformation-constraint residual.
    pub constraint: T,
    /// Allowed negative excursion of the uncertainty-relation eigenvalue and
    /// of the partially transposed symplectic eigenvalue below 1/2.
    pub physicality: T,
}

impl<T: Real> Tolerances<T> {
    fn floor(spec: f64, eps_multiple: f64) -> T {
        let eps = T::epsilon().as_f64();
        T::lit(spec.max(eps * eps_multiple))
    }

    pub fn with_identity(mut self, identity: T) -> Self {
        self.identity = identity;
        self
    }
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            identity: Self::floor(1e-9, 1e4),
            degeneracy: Self::floor(1e-10, 1e2),
            separability: Self::floor(1e-10, 1e2),
            constraint: Self::floor(1e-12, 1e2),
            physicality: Self::floor(1e-10, 1e2),
        }
    }
}

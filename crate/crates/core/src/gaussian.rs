//! Gaussian ground state, its second moments and the energy ladder.
//!
//! In the position representation the vacuum is
//! `psi0 = A0 exp(-L11 x1^2 - L22 x2^2 - L12 x1 x2)` with real `L11`, `L22`
//! and purely imaginary `L12 = i * lambda12_im`. The imaginary cross term is
//! what correlates `x1` with `p2` and `x2` with `p1`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues4, Mat2, Mat4};
use crate::params::{canonical_commutators, CommutativeParams};
use crate::scalar::Real;
use crate::symplectic::SpectralData;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroundState<T> {
    pub lambda11: T,
    pub lambda22: T,
    /// `L12 = i * lambda12_im`.
    pub lambda12_im: T,
    /// Trace of the diagonal frequency matrix, `2 (l1 + l2)`.
    pub tau_lambda: T,
    /// Its determinant, `l1^2 l2^2`.
    pub delta_lambda_det: T,
    pub delta_lambda_denom: T,
    pub a0_mod: T,
    /// `4 L11 L22 - L12^2 = 4 L11 L22 + lambda12_im^2`.
    pub d: T,
    pub hbar: T,
}

impl<T: Real> GroundState<T> {
    pub fn lambda12(&self) -> Complex<T> {
        Complex::new(T::zero(), self.lambda12_im)
    }

    /// `|L12|^2 / (4 L11 L22)`: zero exactly when the modes are unentangled.
    pub fn squeezing(&self) -> T {
        self.lambda12_im * self.lambda12_im / (T::lit(4.0) * self.lambda11 * self.lambda22)
    }

    /// Builds a state directly from exponent coefficients (used for synthetic
    /// states in tests and scans). Derived scalars that need the spectrum are
    /// set to NaN.
    pub fn from_coefficients(lambda11: T, lambda22: T, lambda12_im: T, hbar: T) -> Result<Self> {
        if !(lambda11 > T::zero() && lambda22 > T::zero() && lambda12_im.is_finite()) {
            return Err(Error::DegenerateGroundState(f64::NAN));
        }
        Ok(Self::assemble(lambda11, lambda22, lambda12_im, T::nan(), T::nan(), T::nan(), hbar))
    }

    fn assemble(l11: T, l22: T, l12: T, tau: T, det: T, denom: T, hbar: T) -> Self {
        let four = T::lit(4.0);
        GroundState {
            lambda11: l11,
            lambda22: l22,
            lambda12_im: l12,
            tau_lambda: tau,
            delta_lambda_det: det,
            delta_lambda_denom: denom,
            a0_mod: (four * l11 * l22 / (T::PI() * T::PI())).sqrt().sqrt(),
            d: four * l11 * l22 + l12 * l12,
            hbar,
        }
    }
}

pub fn ground_state<T: Real>(
    cp: &CommutativeParams<T>,
    sd: &SpectralData<T>,
    tol: &Tolerances<T>,
) -> Result<GroundState<T>> {
    let (mu1, mu2) = (cp.mu1, cp.mu2);
    let (n1, n2) = (cp.nu1, cp.nu2);
    let w2s = cp.w2 * cp.w2;
    let four = T::lit(4.0);
    let two = T::two();

    let tau = two * (sd.lambda1 + sd.lambda2);
    let root_det = sd.lambda1 * sd.lambda2;
    let det = root_det * root_det;
    let pos = mu2 * (w2s + root_det);
    let neg = four * mu1 * n1 * n1;
    let denom = pos - neg;
    if !(denom > tol.degeneracy * (pos + neg)) {
        return Err(Error::DegenerateGroundState(denom.as_f64()));
    }

    // coefficients at hbar = 1, then rescaled
    let l11 = mu1 * mu2 * tau * root_det / (four * denom);
    let l22 = mu2 * tau * (mu2 * w2s - neg) / (four * denom);
    let l12 = two * mu2 / denom * (four * mu1 * n1 * n1 * n2 - mu2 * n2 * w2s + mu1 * n1 * root_det);
    if !(l11 > T::zero() && l22 > T::zero()) {
        return Err(Error::DegenerateGroundState(denom.as_f64()));
    }
    let h = cp.hbar;
    Ok(GroundState::assemble(l11 / h, l22 / h, l12 / h, tau, det, denom, h))
}

/// `A0 exp(-L11 x1^2 - L22 x2^2 - L12 x1 x2)` with `A0 = |A0|`.
pub fn psi0<T: Real>(gs: &GroundState<T>, x1: T, x2: T) -> Complex<T> {
    let re = -gs.lambda11 * x1 * x1 - gs.lambda22 * x2 * x2;
    let im = -gs.lambda12_im * x1 * x2;
    Complex::from_polar(gs.a0_mod * re.exp(), im)
}

/// Symmetrized second moments in the ordering `(x1, p1, x2, p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct CovarianceMatrix<T> {
    pub v: Mat4<T>,
    pub hbar: T,
}

impl<T: Real> CovarianceMatrix<T> {
    /// Wraps an arbitrary matrix; it must be finite and symmetric.
    pub fn from_matrix(v: Mat4<T>, hbar: T) -> Result<Self> {
        let scale = v.max_abs();
        let asym = (v - v.transpose()).max_abs();
        if !(scale.is_finite() && asym <= T::epsilon() * T::lit(16.0) * scale) {
            return Err(Error::UnphysicalCovariance(f64::NAN));
        }
        Ok(CovarianceMatrix { v, hbar })
    }

    pub fn v11(&self) -> Mat2<T> {
        self.block(0, 0)
    }

    pub fn v22(&self) -> Mat2<T> {
        self.block(2, 2)
    }

    /// Rows `(x1, p1)`, columns `(x2, p2)`.
    pub fn v12(&self) -> Mat2<T> {
        self.block(0, 2)
    }

    fn block(&self, r: usize, c: usize) -> Mat2<T> {
        Mat2::from_fn(|i, j| self.v[(r + i, c + j)])
    }

    /// `V / hbar`, the dimensionless matrix entering every criterion.
    pub fn scaled(&self) -> Mat4<T> {
        self.v.scale(T::one() / self.hbar)
    }

    /// Smallest eigenvalue of `V/hbar + (i/2) J`; non-negative for a
    /// physical state.
    pub fn physicality_min_eigenvalue(&self) -> T {
        let vs = self.scaled().to_complex();
        let j = canonical_commutators::<T>().to_complex();
        let m = vs + j.scale(Complex::new(T::zero(), T::half()));
        hermitian_eigenvalues4(&m)[0]
    }

    pub fn check_physical(&self, tol: &Tolerances<T>) -> Result<()> {
        let e = self.physicality_min_eigenvalue();
        if e >= -tol.physicality {
            Ok(())
        } else {
            Err(Error::UnphysicalCovariance(e.as_f64()))
        }
    }
}

pub fn covariance<T: Real>(gs: &GroundState<T>) -> CovarianceMatrix<T> {
    let four = T::lit(4.0);
    let h = gs.hbar;
    let (l11, l22) = (gs.lambda11, gs.lambda22);
    // <x1 p2> = i L12 / 4 L11 and <p1 x2> = i L12 / 4 L22, real because
    // L12 is imaginary
    let x1p2 = -h * gs.lambda12_im / (four * l11);
    let p1x2 = -h * gs.lambda12_im / (four * l22);
    let mut v = Mat4::diag([
        T::one() / (four * l11),
        h * h * gs.d / (four * l22),
        T::one() / (four * l22),
        h * h * gs.d / (four * l11),
    ]);
    v[(0, 3)] = x1p2;
    v[(3, 0)] = x1p2;
    v[(1, 2)] = p1x2;
    v[(2, 1)] = p1x2;
    CovarianceMatrix { v, hbar: h }
}

/// `(dx1 dp1, dx2 dp2)`, both `hbar/2 sqrt(1 + |L12|^2 / 4 L11 L22)`.
pub fn variance_products<T: Real>(gs: &GroundState<T>) -> (T, T) {
    let v = covariance(gs).v;
    ((v[(0, 0)] * v[(1, 1)]).sqrt(), (v[(2, 2)] * v[(3, 3)]).sqrt())
}

/// `hbar ((n1 + 1/2) l1 + (n2 + 1/2) l2)`.
pub fn energy<T: Real>(sd: &SpectralData<T>, n1: u64, n2: u64) -> T {
    let k1 = T::lit(n1 as f64) + T::half();
    let k2 = T::lit(n2 as f64) + T::half();
    sd.hbar * (k1 * sd.lambda1 + k2 * sd.lambda2)
}

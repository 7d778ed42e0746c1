//! Work extractable from mode 1 after a Gaussian measurement on mode 2.
//!
//! A general-dyne measurement with covariance `gamma` leaves mode 1 in the
//! conditional state `V11 - V12 (V22 + gamma)^-1 V12^T`. With the Rényi-2
//! entropy `S2 = 1/2 ln det(V/hbar) + const` the extractable work is
//! `kT (S2(V11) - S2(V11_cond)) = kT/2 ln(det V11 / det V11_cond)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::linalg::Mat2;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementSpec<T> {
    /// Squeezing of the measurement: 1 is heterodyne, 0 would be homodyne.
    pub mu: T,
    /// Rotation of the measured quadrature, in radians.
    pub theta: T,
    /// Thermal energy `k_B T`.
    pub kbt: T,
}

impl<T: Real> Default for MeasurementSpec<T> {
    fn default() -> Self {
        MeasurementSpec {
            mu: T::one(),
            theta: T::zero(),
            kbt: T::one(),
        }
    }
}

impl<T: Real> MeasurementSpec<T> {
    pub fn heterodyne() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu == T::zero() {
            return Err(Error::HomodyneUnsupported);
        }
        if !(self.mu > T::zero() && self.mu.is_finite()) {
            return Err(Error::InvalidMeasurement(format!("mu must be positive and finite, got {}", self.mu)));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidMeasurement(format!("theta must be finite, got {}", self.theta)));
        }
        if !(self.kbt > T::zero() && self.kbt.is_finite()) {
            return Err(Error::InvalidMeasurement(format!("kbt must be positive and finite, got {}", self.kbt)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SzilardResult<T> {
    pub spec: MeasurementSpec<T>,
    pub gamma: Mat2<T>,
    pub v11: Mat2<T>,
    pub v11_cond: Mat2<T>,
    pub det_v11: T,
    pub det_v11_cond: T,
    /// `kT/2 ln(det V11 / det V11_cond)`.
    pub work: T,
    /// Heterodyne closed form in the exponent coefficients; `None` unless
    /// `mu = 1`.
    pub work_closed_form: Option<T>,
    /// `|work - work_closed_form|`.
    pub closed_form_deviation: Option<T>,
}

/// `hbar R(theta) diag(mu/2, 1/(2 mu)) R(theta)^T`.
pub fn measurement_covariance<T: Real>(spec: &MeasurementSpec<T>, hbar: T) -> Result<Mat2<T>> {
    spec.validate()?;
    let (s, c) = spec.theta.sin_cos();
    let r = Mat2::from_rows([[c, -s], [s, c]]);
    let d = Mat2::diag([spec.mu / T::two(), T::one() / (T::two() * spec.mu)]);
    Ok((r * d * r.transpose()).scale(hbar))
}

/// Schur complement `V11 - V12 (V22 + gamma)^-1 V12^T`.
pub fn conditional_covariance<T: Real>(cov: &CovarianceMatrix<T>, gamma: &Mat2<T>, tol: &Tolerances<T>) -> Result<Mat2<T>> {
    let s = cov.v22() + *gamma;
    let det = s.det();
    let scale = s.frobenius_norm();
    if !(det.abs() > tol.degeneracy * scale * scale) {
        return Err(Error::SingularMeasurement(det.as_f64()));
    }
    let s_inv = s.inverse().ok_or(Error::SingularMeasurement(det.as_f64()))?;
    let c = cov.v12();
    let upd = cov.v11() - c * s_inv * c.transpose();
    Ok(Mat2::from_fn(|i, j| T::half() * (upd[(i, j)] + upd[(j, i)])))
}

pub fn extractable_work<T: Real>(
    cov: &CovarianceMatrix<T>,
    spec: &MeasurementSpec<T>,
    tol: &Tolerances<T>,
) -> Result<SzilardResult<T>> {
    let gamma = measurement_covariance(spec, cov.hbar)?;
    let v11 = cov.v11();
    let v11_cond = conditional_covariance(cov, &gamma, tol)?;
    let det_v11 = v11.det();
    let det_v11_cond = v11_cond.det();
    let work = T::half() * spec.kbt * (det_v11 / det_v11_cond).ln();
    let work_closed_form = (spec.mu == T::one()).then(|| heterodyne_closed_form(cov, spec.kbt));
    Ok(SzilardResult {
        spec: *spec,
        gamma,
        v11,
        v11_cond,
        det_v11,
        det_v11_cond,
        work,
        work_closed_form,
        closed_form_deviation: work_closed_form.map(|w| (w - work).abs()),
    })
}

/// `-kT/2 ln[(1 + L12^2 / (d + 2 L11)) (1 + L12^2 / (d (1 + 2 L22)))]` with
/// `L12^2 = -lambda12_im^2`, in units where `hbar = 1`. The coefficients are
/// read back from the ground-state moments `<x1^2>`, `<x2^2>` and `<x1 p2>`.
pub fn heterodyne_closed_form<T: Real>(cov: &CovarianceMatrix<T>, kbt: T) -> T {
    let v = cov.scaled();
    let four = T::lit(4.0);
    let l11 = T::one() / (four * v[(0, 0)]);
    let l22 = T::one() / (four * v[(2, 2)]);
    let l12_im = -four * l11 * v[(0, 3)];
    let l12_sq = -l12_im * l12_im;
    let d = four * l11 * l22 - l12_sq;
    let f1 = T::one() + l12_sq / (d + T::two() * l11);
    let f2 = T::one() + l12_sq / (d * (T::one() + T::two() * l22));
    -T::half() * kbt * (f1 * f2).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{covariance, ground_state, GroundState};
    use crate::params::PhysicalParams;
    use crate::symplectic::spectral_data;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn cov_of(p: PhysicalParams<f64>) -> CovarianceMatrix<f64> {
        let cp = p.to_commutative();
        let sd = spectral_data(&cp, &tol()).unwrap();
        covariance(&ground_state(&cp, &sd, &tol()).unwrap())
    }

    #[test]
    fn measurement_covariance_examples() {
        let g = measurement_covariance(&MeasurementSpec::heterodyne(), 1.0).unwrap();
        assert_eq!(g, Mat2::diag([0.5, 0.5]));
        let spec = MeasurementSpec { mu: 1.0, theta: 0.7, kbt: 1.0 };
        assert!((measurement_covariance(&spec, 1.0).unwrap() - Mat2::diag([0.5, 0.5])).max_abs() < 1e-16);
        let spec = MeasurementSpec { mu: 2.0, theta: std::f64::consts::FRAC_PI_2, kbt: 1.0 };
        assert!((measurement_covariance(&spec, 1.0).unwrap() - Mat2::diag([0.25, 1.0])).max_abs() < 1e-15);
    }

    #[test]
    fn measurement_validation() {
        let homodyne = MeasurementSpec { mu: 0.0, ..Default::default() };
        assert_eq!(homodyne.validate(), Err(Error::HomodyneUnsupported));
        let bad = MeasurementSpec { mu: -1.0, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidMeasurement(_))));
        let cold = MeasurementSpec { kbt: 0.0, ..MeasurementSpec::<f64>::default() };
        assert!(matches!(cold.validate(), Err(Error::InvalidMeasurement(_))));
    }

    #[test]
    fn uncorrelated_state_gives_no_work() {
        let cov = cov_of(PhysicalParams::new(1.0, 2.0, 1.0, 2.0, 0.1, 0.4));
        let r = extractable_work(&cov, &MeasurementSpec::heterodyne(), &tol()).unwrap();
        assert!(r.work.abs() < 1e-12);
        let cov = cov_of(PhysicalParams::new(1.0, 1.0, 1.0, 2.0, 0.0, 0.0));
        let r = extractable_work(&cov, &MeasurementSpec::heterodyne(), &tol()).unwrap();
        assert_eq!(r.work, 0.0);
        assert_eq!(r.v11_cond, r.v11);
    }

    #[test]
    fn correlated_state_gives_positive_work() {
        let cov = cov_of(PhysicalParams::new(1.0, 1.0, 1.0, 2.0, 0.1, 0.1));
        let spec = MeasurementSpec::heterodyne();
        let r = extractable_work(&cov, &spec, &tol()).unwrap();
        assert!(r.work > 0.0);
        assert!(r.det_v11_cond < r.det_v11);
        assert_eq!(r.v11_cond[(0, 1)], r.v11_cond[(1, 0)]);
        assert!(r.closed_form_deviation.unwrap() < 1e-14 * r.work.max(1e-300) + 1e-16);
        let hot = MeasurementSpec { kbt: 2.0, ..spec };
        let r2 = extractable_work(&cov, &hot, &tol()).unwrap();
        assert!((r2.work - 2.0 * r.work).abs() < 1e-15);
        let squeezed = MeasurementSpec { mu: 3.0, theta: 0.4, kbt: 1.0 };
        let r3 = extractable_work(&cov, &squeezed, &tol()).unwrap();
        assert!(r3.work > 0.0 && r3.work_closed_form.is_none());
    }

    #[test]
    fn work_grows_with_cross_term() {
        let mut last = -1.0;
        for k in 0..20 {
            let gs = GroundState::from_coefficients(0.6, 0.9, 0.1 * k as f64, 1.0).unwrap();
            let r = extractable_work(&covariance(&gs), &MeasurementSpec::heterodyne(), &tol()).unwrap();
            assert!(r.work >= last);
            last = r.work;
        }
    }
}

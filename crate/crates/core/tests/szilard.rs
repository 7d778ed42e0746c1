mod common;

use common::Sampler;
use ncosc::gaussian::{covariance, ground_state, GroundState};
use ncosc::symplectic::spectral_data;
use ncosc::szilard::heterodyne_closed_form;
use ncosc::{extractable_work, MeasurementSpec, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

proptest! {
    #[test]
    fn work_is_monotone_in_cross_term(l11 in 0.2..2.0f64, l22 in 0.2..2.0f64, a in 0.0..3.0f64, b in 0.0..3.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let spec = MeasurementSpec::heterodyne();
        let w = |l12: f64| {
            let cov = covariance(&GroundState::from_coefficients(l11, l22, l12, 1.0).unwrap());
            extractable_work(&cov, &spec, &tol()).unwrap().work
        };
        prop_assert!(w(hi) >= w(lo) - 1e-14);
        prop_assert!(w(lo) >= -1e-12);
    }

    #[test]
    fn any_measurement_gives_non_negative_work(mu in 0.05..20.0f64, theta in 0.0..6.3f64, l12 in -2.0..2.0f64) {
        let cov = covariance(&GroundState::from_coefficients(0.7, 1.1, l12, 1.0).unwrap());
        let r = extractable_work(&cov, &MeasurementSpec { mu, theta, kbt: 1.0 }, &tol()).unwrap();
        prop_assert!(r.work >= -1e-12);
        prop_assert!(r.det_v11_cond <= r.det_v11 + 1e-12);
    }
}

#[test]
fn closed_form_tracks_log_det_on_random_states() {
    let mut s = Sampler::new(51);
    for _ in 0..200 {
        let p = s.valid();
        let cp = p.to_commutative();
        let cov = covariance(&ground_state(&cp, &spectral_data(&cp, &tol()).unwrap(), &tol()).unwrap());
        let r = extractable_work(&cov, &MeasurementSpec::heterodyne(), &tol()).unwrap();
        let closed = heterodyne_closed_form(&cov, 1.0);
        assert!((closed - r.work).abs() <= 1e-6 * r.work.abs() + 1e-15, "{closed} vs {}", r.work);
    }
}

#[test]
fn separable_surface_gives_zero_work() {
    let mut s = Sampler::new(52);
    for _ in 0..50 {
        let p = s.on_constraint();
        let cp = p.to_commutative();
        let cov = covariance(&ground_state(&cp, &spectral_data(&cp, &tol()).unwrap(), &tol()).unwrap());
        assert!(extractable_work(&cov, &MeasurementSpec::heterodyne(), &tol()).unwrap().work.abs() < 1e-12);
    }
}

mod common;

use common::{dense_eigenvalues, rel, Sampler};
use ncosc::symplectic::{assemble_eigensystem, b_from_minors, build_hamiltonian, build_omega, spectral_data, symplectic_residual};
use ncosc::{PhysicalParams, Tolerances};
use proptest::prelude::*;

fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

fn params() -> impl Strategy<Value = PhysicalParams<f64>> {
    (0.5..2.0f64, 0.5..2.0f64, 0.5..2.0f64, 0.5..2.0f64, 0.0..1.0f64, 0.0..1.0f64)
        .prop_map(|(m1, m2, w1, w2, th, et)| PhysicalParams::new(m1, m2, w1, w2, th, et))
        .prop_filter("non-degenerate", |p| spectral_data(&p.to_commutative(), &tol()).is_ok())
}

proptest! {
    #[test]
    fn frequencies_match_dense_solver(p in params()) {
        let cp = p.to_commutative();
        let sd = spectral_data(&cp, &tol()).unwrap();
        let ev = dense_eigenvalues(&build_omega(&build_hamiltonian(&cp)));
        for (z, w) in ev.iter().zip([-sd.lambda1, -sd.lambda2, sd.lambda2, sd.lambda1]) {
            prop_assert!(rel(z.im, w) < 1e-9, "{} vs {}", z.im, w);
            prop_assert!(z.re.abs() < 1e-10 * sd.lambda1);
        }
    }

    #[test]
    fn coefficient_from_minors_agrees(p in params()) {
        let cp = p.to_commutative();
        let sd = spectral_data(&cp, &tol()).unwrap();
        let from_minors = b_from_minors(&build_omega(&build_hamiltonian(&cp)));
        prop_assert!(rel(from_minors, sd.b) < 1e-12);
    }

    #[test]
    fn flow_is_hamiltonian_and_eigensystem_closes(p in params()) {
        let cp = p.to_commutative();
        let qf = build_hamiltonian(&cp);
        prop_assert!(symplectic_residual(&qf) < 1e-14);
        let es = assemble_eigensystem(&cp, &spectral_data(&cp, &tol()).unwrap(), &tol()).unwrap();
        prop_assert!(es.residuals.max() < 1e-9, "{:?}", es.residuals);
    }
}

#[test]
fn tiny_deformation_collapses_to_commutative() {
    let mut s = Sampler::new(11);
    for _ in 0..50 {
        let mut p = s.commutative();
        let exact = spectral_data(&p.to_commutative(), &tol()).unwrap();
        p.theta = 1e-8;
        p.eta = 1e-8;
        let near = spectral_data(&p.to_commutative(), &tol()).unwrap();
        assert!(rel(near.lambda1, exact.lambda1) < 1e-7);
        assert!(rel(near.lambda2, exact.lambda2) < 1e-7);
    }
}

#[test]
fn frequencies_are_planck_independent_when_undeformed() {
    let p = PhysicalParams::new(1.3, 0.7, 1.1, 1.9, 0.0, 0.0);
    let a = spectral_data(&p.to_commutative(), &tol()).unwrap();
    let b = spectral_data(&p.with_hbar(2.5).to_commutative(), &tol()).unwrap();
    assert_eq!((a.lambda1, a.lambda2), (b.lambda1, b.lambda2));
}

#[test]
fn deformed_spectrum_depends_on_planck_through_the_map() {
    // the deformation enters only through theta/hbar and eta/hbar
    let p = PhysicalParams::new(1.3, 0.7, 1.1, 1.9, 0.2, 0.3);
    let q = PhysicalParams::new(1.3, 0.7, 1.1, 1.9, 0.4, 0.6).with_hbar(2.0);
    let (a, b) = (p.to_commutative(), q.to_commutative());
    assert!(rel(a.mu1, b.mu1) < 1e-14 && rel(a.mu2, b.mu2) < 1e-14);
}

//! Shared oracles and samplers for the integration and acceptance tests.
//!
//! Nothing here reuses the closed forms under test: the spectrum comes from a
//! dense eigensolver, the ground state from substituting a Gaussian ansatz
//! into the Schrödinger equation, and the Wigner function from direct
//! quadrature of its defining integral.

#![allow(dead_code)]

use nalgebra::{Complex as NComplex, Matrix4};
use ncosc::gaussian::{psi0, GroundState};
use ncosc::linalg::Mat4;
use ncosc::symplectic::spectral_data;
use ncosc::{CommutativeParams, PhysicalParams, Tolerances};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type P = PhysicalParams<f64>;

/// Random parameter points: masses and frequencies in [0.5, 2], deformations
/// in [0.01, 1]. Points whose spectrum is (numerically) degenerate are
/// redrawn and counted.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub rejected: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rejected: 0,
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn raw(&mut self) -> P {
        let m1 = self.uniform(0.5, 2.0);
        let m2 = self.uniform(0.5, 2.0);
        let w1 = self.uniform(0.5, 2.0);
        let w2 = self.uniform(0.5, 2.0);
        let th = self.uniform(0.01, 1.0);
        let et = self.uniform(0.01, 1.0);
        PhysicalParams::new(m1, m2, w1, w2, th, et)
    }

    fn accept(&mut self, p: P) -> bool {
        let ok = spectral_data(&p.to_commutative(), &Tolerances::default()).is_ok();
        if !ok {
            self.rejected += 1;
        }
        ok
    }

    /// Generic deformed point.
    pub fn valid(&mut self) -> P {
        loop {
            let p = self.raw();
            if self.accept(p) {
                return p;
            }
        }
    }

    /// Undeformed point.
    pub fn commutative(&mut self) -> P {
        loop {
            let mut p = self.raw();
            p.theta = 0.0;
            p.eta = 0.0;
            if self.accept(p) {
                return p;
            }
        }
    }

    /// Deformed point on the surface `theta m1 wt1 = eta / (m2 wt2)`.
    pub fn on_constraint(&mut self) -> P {
        loop {
            let mut p = self.raw();
            p.eta = p.separable_eta();
            if self.accept(p) {
                return p;
            }
        }
    }

    pub fn phase_point(&mut self, scale: [f64; 4]) -> [f64; 4] {
        std::array::from_fn(|k| self.uniform(-1.5, 1.5) * scale[k])
    }
}

pub fn to_na(m: &Mat4<f64>) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[(i, j)])
}

pub fn to_na_c(m: &Mat4<Complex<f64>>) -> Matrix4<NComplex<f64>> {
    Matrix4::from_fn(|i, j| NComplex::new(m[(i, j)].re, m[(i, j)].im))
}

/// Eigenvalues of `Omega` from a general dense solver, sorted by imaginary
/// part.
pub fn dense_eigenvalues(omega: &Mat4<f64>) -> Vec<NComplex<f64>> {
    let mut ev: Vec<NComplex<f64>> = to_na(omega).complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
    ev
}

/// Ground state from the Gaussian ansatz
/// `psi = exp(-a x1^2 - b x2^2 - i l x1 x2)` substituted into `H psi = E psi`
/// (at `hbar = 1`). The `x1^2` and `x2^2` equations give `a(l)` and `b(l)`;
/// the `x1 x2` equation `l (a/mu1 + b/mu2) = 2 (nu1 a - nu2 b)` is solved for
/// `l` by bracketing and bisection. Among all admissible roots the one with
/// the lowest energy `E = a/mu1 + b/mu2` is returned as `(a, b, l, E)`.
pub fn ansatz_ground_state(cp: &CommutativeParams<f64>) -> Option<(f64, f64, f64, f64)> {
    let (mu1, mu2, n1, n2) = (cp.mu1, cp.mu2, cp.nu1, cp.nu2);
    let (w1s, w2s) = (cp.w1 * cp.w1, cp.w2 * cp.w2);
    let a_sq = |l: f64| 0.5 * mu1 * (0.5 * mu1 * w1s + l * l / (2.0 * mu2) + 2.0 * n2 * l);
    let b_sq = |l: f64| 0.5 * mu2 * (0.5 * mu2 * w2s + l * l / (2.0 * mu1) - 2.0 * n1 * l);
    let f = |l: f64| -> Option<f64> {
        let (a2, b2) = (a_sq(l), b_sq(l));
        if a2 <= 0.0 || b2 <= 0.0 {
            return None;
        }
        let (a, b) = (a2.sqrt(), b2.sqrt());
        Some(l * (a / mu1 + b / mu2) - 2.0 * (n1 * a - n2 * b))
    };
    let scale = 1.0 + mu1 * cp.w1 + mu2 * cp.w2 + 4.0 * (mu1 * n1.abs() + mu2 * n2.abs());
    let span = 20.0 * scale;
    let n = 4000;
    let mut best: Option<(f64, f64, f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let l = -span + 2.0 * span * k as f64 / n as f64;
        let cur = f(l).map(|v| (l, v));
        if let (Some((l0, f0)), Some((l1, f1))) = (prev, cur) {
            if f0 == 0.0 || f0.signum() != f1.signum() {
                let (mut lo, mut hi, mut flo) = (l0, l1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = f(mid).unwrap_or(f64::NAN);
                    if fm.is_nan() {
                        break;
                    }
                    if fm.signum() == flo.signum() && fm != 0.0 {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
                        break;
                    }
                }
                let l = 0.5 * (lo + hi);
                let (a, b) = (a_sq(l).sqrt(), b_sq(l).sqrt());
                let e = a / mu1 + b / mu2;
                if best.map_or(true, |x| e < x.3) {
                    best = Some((a, b, l, e));
                }
            }
        }
        prev = cur;
    }
    best
}

/// `(1 / (pi hbar)^2) ∫∫ psi*(x - t) psi(x + t) exp(-2 i p.t / hbar) d^2 t`
/// by the trapezoid rule on a box wide enough for the Gaussian envelope.
pub fn wigner_by_quadrature(gs: &GroundState<f64>, z: &[f64; 4], nodes: usize) -> f64 {
    let h = gs.hbar;
    let (x1, p1, x2, p2) = (z[0], z[1], z[2], z[3]);
    // the envelope in t decays like exp(-2 L11 t1^2 - 2 L22 t2^2)
    let l1 = 7.0 / (2.0 * gs.lambda11).sqrt();
    let l2 = 7.0 / (2.0 * gs.lambda22).sqrt();
    let d1 = 2.0 * l1 / (nodes - 1) as f64;
    let d2 = 2.0 * l2 / (nodes - 1) as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..nodes {
        let t1 = -l1 + d1 * i as f64;
        let wi = if i == 0 || i == nodes - 1 { 0.5 } else { 1.0 };
        for j in 0..nodes {
            let t2 = -l2 + d2 * j as f64;
            let wj = if j == 0 || j == nodes - 1 { 0.5 } else { 1.0 };
            let a = psi0(gs, x1 - t1, x2 - t2).conj();
            let b = psi0(gs, x1 + t1, x2 + t2);
            let phase = Complex::from_polar(1.0, -2.0 * (p1 * t1 + p2 * t2) / h);
            acc += a * b * phase * (wi * wj);
        }
    }
    let pi_h = std::f64::consts::PI * h;
    acc.re * d1 * d2 / (pi_h * pi_h)
}

/// Trapezoid rule over a 4D box `centre ± half_width` with `n` nodes per
/// axis.
pub fn trapezoid_4d(f: impl Fn(&[f64; 4]) -> f64 + Sync, half_width: [f64; 4], n: usize) -> f64 {
    use rayon::prelude::*;
    let h: [f64; 4] = std::array::from_fn(|k| 2.0 * half_width[k] / (n - 1) as f64);
    let w = |i: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let z = [
                            -half_width[0] + h[0] * i as f64,
                            -half_width[1] + h[1] * j as f64,
                            -half_width[2] + h[2] * k as f64,
                            -half_width[3] + h[3] * l as f64,
                        ];
                        acc += w(i) * w(j) * w(k) * w(l) * f(&z);
                    }
                }
            }
            acc
        })
        .sum();
    total * h.iter().product::<f64>()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

//! Quadratic-form Hamiltonian, its flow matrix `Omega`, and the closed-form
//! normal-mode decomposition.
//!
//! Phase-space ordering is `X = (x1, p1, x2, p2)` throughout. The canonical
//! commutators are `[X_a, X_b] = -(Sigma_y)_ab` (at `hbar = 1`) with
//! `Sigma_y = diag(sigma_y, sigma_y)`, and the Heisenberg flow is
//! `[iH, X] = Omega X` with `Omega = i Sigma_y H`, which is a real matrix.
//!
//! `Omega` has eigenvalues `(-i l1, i l1, -i l2, i l2)`. The left eigenvectors
//! for `-i l_k` have a closed form; the right eigenvectors follow from
//! `v = -Sigma_y u^dagger`, and stacking them gives the similarity transform
//! `Q` whose inverse maps `X` onto ladder operators `zeta = Q^-1 X`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, vec_conj, vec_norm, CMat4, CVec4, Mat2, Mat4};
use crate::params::CommutativeParams;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// `H` in `H_op = 1/2 X^T H X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct QuadraticForm<T> {
    pub h: Mat4<T>,
}

impl<T: Real> QuadraticForm<T> {
    /// Upper-left block, acting on `(x1, p1)`.
    pub fn c_block(&self) -> Mat2<T> {
        self.block(0, 0)
    }

    /// Lower-right block, acting on `(x2, p2)`.
    pub fn b_block(&self) -> Mat2<T> {
        self.block(2, 2)
    }

    /// Lower-left coupling block, rows `(x2, p2)`, columns `(x1, p1)`.
    pub fn a_block(&self) -> Mat2<T> {
        self.block(2, 0)
    }

    fn block(&self, r: usize, c: usize) -> Mat2<T> {
        Mat2::from_fn(|i, j| self.h[(r + i, c + j)])
    }

    /// Classical energy `1/2 x^T H x` at a phase point.
    pub fn energy(&self, x: &[T; 4]) -> T {
        T::half() * dot(x, &self.h.mul_vec(x))
    }
}

/// Mode index, ordered so that `lambda1 >= lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    First,
    Second,
}

impl Mode {
    pub fn number(self) -> usize {
        match self {
            Mode::First => 1,
            Mode::Second => 2,
        }
    }
}

/// Characteristic-polynomial data of `Omega`, `p(s) = s^4 + b s^2 + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData<T> {
    pub b: T,
    pub c: T,
    /// Discriminant `b^2 - 4c`.
    pub delta: T,
    /// Auxiliary scalars of the coupled case; `None` when a coupling vanishes.
    pub wx2: Option<T>,
    pub wy2: Option<T>,
    pub alpha0: Option<T>,
    pub lambda1: T,
    pub lambda2: T,
    pub hbar: T,
}

impl<T: Real> SpectralData<T> {
    pub fn lambda(&self, mode: Mode) -> T {
        match mode {
            Mode::First => self.lambda1,
            Mode::Second => self.lambda2,
        }
    }

    /// `diag(-i l1, i l1, -i l2, i l2)`.
    pub fn omega_diagonal(&self) -> CVec4<T> {
        let (l1, l2) = (self.lambda1, self.lambda2);
        [
            Complex::new(T::zero(), -l1),
            Complex::new(T::zero(), l1),
            Complex::new(T::zero(), -l2),
            Complex::new(T::zero(), l2),
        ]
    }
}

/// Where a left eigenvector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenvectorSource {
    ClosedForm,
    NullSpace,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeftEigenvector<T> {
    /// Normalized so that `u . (-Sigma_y u^dagger) = 1`.
    pub u: CVec4<T>,
    pub source: EigenvectorSource,
    /// `|u Omega + i lambda u| / (|u| |Omega|)`.
    pub residual: T,
}

/// Relative residuals of every identity the eigen-system must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenResiduals<T> {
    /// `max |u_i . v_j - delta_ij|`.
    pub biorthogonality: T,
    /// `max |u_i . v_j^* - u_i^* . v_j|`.
    pub conjugate_pairing: T,
    /// `u_i Omega = -i l_i u_i`.
    pub left_eigen: T,
    /// `v_i = -Sigma_y u_i^dagger` is a right eigenvector of `Omega`.
    pub left_right_relation: T,
    /// `Q^-1 Omega Q = Omega_D`.
    pub diagonalization: T,
    /// `Q^dagger = -Sigma_z Q^-1 Sigma_y`.
    pub q_dagger: T,
    /// `[zeta_k, zeta_l^dagger] = delta_kl`.
    pub ladder_commutators: T,
    /// `Q^-1 Q = I`.
    pub inverse: T,
}

impl<T: Real> EigenResiduals<T> {
    pub fn named(&self) -> [(&'static str, T); 8] {
        [
            ("biorthogonality", self.biorthogonality),
            ("conjugate_pairing", self.conjugate_pairing),
            ("left_eigen", self.left_eigen),
            ("left_right_relation", self.left_right_relation),
            ("diagonalization", self.diagonalization),
            ("q_dagger", self.q_dagger),
            ("ladder_commutators", self.ladder_commutators),
            ("inverse", self.inverse),
        ]
    }

    pub fn max(&self) -> T {
        self.named()
            .iter()
            .fold(T::zero(), |acc, &(_, r)| acc.max(r))
    }

    /// Fails on the first residual above `tol` (or not finite).
    pub fn check(&self, tol: T) -> Result<()> {
        for (name, r) in self.named() {
            if !(r <= tol) {
                return Err(Error::IdentityCheckFailed {
                    name,
                    residual: r.as_f64(),
                    tolerance: tol.as_f64(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem<T> {
    pub u: [CVec4<T>; 2],
    pub v: [CVec4<T>; 2],
    pub sources: [EigenvectorSource; 2],
    /// Columns `(v1, v1^*, v2, v2^*)`.
    pub q: CMat4<T>,
    /// Rows `(u1, u1^*, u2, u2^*)`.
    pub q_inv: CMat4<T>,
    pub omega_d: CVec4<T>,
    /// Diagonal Hamiltonian frequencies `(l1, l1, l2, l2)`.
    pub sigma: [T; 4],
    pub hbar: T,
    pub residuals: EigenResiduals<T>,
}

impl<T: Real> EigenSystem<T> {
    /// `1/2 zeta^dagger Sigma zeta` at the vacuum: `trace(Sigma) / 4`.
    pub fn zero_point_energy(&self) -> T {
        self.hbar * self.sigma.iter().fold(T::zero(), |a, &s| a + s) / T::lit(4.0)
    }
}

/// `i Sigma_y`: block-diagonal `[[0, 1], [-1, 0]]`.
pub fn i_sigma_y<T: Real>() -> Mat4<T> {
    crate::params::canonical_commutators()
}

pub fn sigma_y<T: Real>() -> CMat4<T> {
    let mut s = CMat4::zeros();
    for k in [0, 2] {
        s[(k, k + 1)] = Complex::new(T::zero(), -T::one());
        s[(k + 1, k)] = Complex::new(T::zero(), T::one());
    }
    s
}

pub fn sigma_z<T: Real>() -> Mat4<T> {
    Mat4::diag([T::one(), -T::one(), T::one(), -T::one()])
}

/// Block symplectic form `[[0, I2], [-I2, 0]]`.
pub fn block_symplectic_form<T: Real>() -> Mat4<T> {
    let (o, l) = (T::zero(), T::one());
    Mat4::from_rows([[o, o, l, o], [o, o, o, l], [-l, o, o, o], [o, -l, o, o]])
}

pub fn build_hamiltonian<T: Real>(cp: &CommutativeParams<T>) -> QuadraticForm<T> {
    let two = T::two();
    let o = T::zero();
    let c11 = cp.mu1 * cp.w1 * cp.w1;
    let c22 = T::one() / cp.mu1;
    let b11 = cp.mu2 * cp.w2 * cp.w2;
    let b22 = T::one() / cp.mu2;
    let a01 = two * cp.nu1;
    let a10 = -two * cp.nu2;
    // [[C, A^T], [A, B]] with A = [[0, 2 nu1], [-2 nu2, 0]]
    QuadraticForm {
        h: Mat4::from_rows([
            [c11, o, o, a10],
            [o, c22, a01, o],
            [o, a01, b11, o],
            [a10, o, o, b22],
        ]),
    }
}

pub fn build_omega<T: Real>(qf: &QuadraticForm<T>) -> Mat4<T> {
    i_sigma_y() * qf.h
}

/// `S = J4 H` with the block symplectic form.
pub fn symplectic_generator<T: Real>(qf: &QuadraticForm<T>) -> Mat4<T> {
    block_symplectic_form() * qf.h
}

/// `|S J4 + J4 S^T| / |S|`.
pub fn symplectic_residual<T: Real>(qf: &QuadraticForm<T>) -> T {
    let s = symplectic_generator(qf);
    let j = block_symplectic_form();
    let r = s * j + j * s.transpose();
    let scale = s.frobenius_norm();
    if scale == T::zero() {
        r.frobenius_norm()
    } else {
        r.frobenius_norm() / scale
    }
}

/// Sum of the principal 2x2 minors of `Omega`: the `s^2` coefficient of its
/// characteristic polynomial, computed straight from the matrix entries.
pub fn b_from_minors<T: Real>(omega: &Mat4<T>) -> T {
    let mut b = T::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            b += omega[(i, i)] * omega[(j, j)] - omega[(i, j)] * omega[(j, i)];
        }
    }
    b
}

/// The printed closed form `w1^2 + w2^2 + 6 nu1 nu2`. Kept only as a
/// diagnostic: it disagrees with the polynomial coefficient whenever both
/// couplings are nonzero.
pub fn b_six_coupling_form<T: Real>(cp: &CommutativeParams<T>) -> T {
    cp.w1 * cp.w1 + cp.w2 * cp.w2 + T::lit(6.0) * cp.nu1 * cp.nu2
}

/// `c` expanded in the commutative parameters.
pub fn c_expanded<T: Real>(cp: &CommutativeParams<T>) -> T {
    let (w1s, w2s) = (cp.w1 * cp.w1, cp.w2 * cp.w2);
    let (n1s, n2s) = (cp.nu1 * cp.nu1, cp.nu2 * cp.nu2);
    let four = T::lit(4.0);
    w1s * w2s + T::lit(16.0) * n1s * n2s
        - four * n1s * w1s * cp.mu1 / cp.mu2
        - four * n2s * w2s * cp.mu2 / cp.mu1
}

pub fn spectral_data<T: Real>(
    cp: &CommutativeParams<T>,
    tol: &Tolerances<T>,
) -> Result<SpectralData<T>> {
    let four = T::lit(4.0);
    let (b, c, wx2, wy2, alpha0) = if cp.nu1 * cp.nu2 > T::zero() {
        let nn = four * cp.nu1 * cp.nu2;
        let wx2 = nn * (cp.mu1 * cp.w1 * cp.w1 / (four * cp.mu2 * cp.nu2 * cp.nu2) - T::one());
        let wy2 = nn * (cp.mu2 * cp.w2 * cp.w2 / (four * cp.mu1 * cp.nu1 * cp.nu1) - T::one());
        let a0 = cp.mu2 * cp.nu2 / (cp.mu1 * cp.nu1);
        let root = a0.sqrt() + T::one() / a0.sqrt();
        let b = a0 * wx2 + wy2 / a0 + nn * root * root;
        (b, wx2 * wy2, Some(wx2), Some(wy2), Some(a0))
    } else {
        let (w1s, w2s) = (cp.w1 * cp.w1, cp.w2 * cp.w2);
        (w1s + w2s, w1s * w2s, None, None, None)
    };
    let delta = b * b - four * c;
    if !(b.is_finite() && c.is_finite()) || b <= T::zero() {
        return Err(Error::DegenerateSpectrum(format!(
            "non-finite or non-positive coefficients b = {b:e}, c = {c:e}"
        )));
    }
    let b2 = b * b;
    if !(delta >= tol.degeneracy * b2) {
        return Err(Error::DegenerateSpectrum(format!(
            "normal modes coincide: discriminant {delta:e} below {:e}",
            tol.degeneracy * b2
        )));
    }
    if !(c >= tol.degeneracy * b2) {
        return Err(Error::DegenerateSpectrum(format!(
            "zero-frequency mode: c = {c:e} below {:e}",
            tol.degeneracy * b2
        )));
    }
    let lambda1 = ((b + delta.sqrt()) / T::two()).sqrt();
    // c / l1^2 avoids the cancellation in (b - sqrt(delta)) / 2
    let lambda2 = c.sqrt() / lambda1;
    Ok(SpectralData {
        b,
        c,
        delta,
        wx2,
        wy2,
        alpha0,
        lambda1,
        lambda2,
        hbar: cp.hbar,
    })
}

/// Unnormalized left eigenvector of `Omega` for eigenvalue `-i lambda`.
/// Vanishes identically for a decoupled mode living on `(x2, p2)`.
pub fn closed_form_left_eigenvector<T: Real>(cp: &CommutativeParams<T>, lambda: T) -> CVec4<T> {
    let (mu1, mu2) = (cp.mu1, cp.mu2);
    let (n1, n2) = (cp.nu1, cp.nu2);
    let w2s = cp.w2 * cp.w2;
    let l2 = lambda * lambda;
    let two = T::two();
    let four = T::lit(4.0);
    let o = T::zero();
    [
        Complex::new(o, -lambda * mu1 * mu2 * (l2 - w2s - four * n1 * n2)),
        Complex::new(mu2 * (l2 - w2s) + four * mu1 * n1 * n1, o),
        Complex::new(two * n1 * mu1 * mu2 * (l2 - four * n1 * n2) + two * n2 * mu2 * mu2 * w2s, o),
        Complex::new(o, two * lambda * (mu1 * n1 + mu2 * n2)),
    ]
}

/// `v = -Sigma_y u^dagger`, as a column.
pub fn right_from_left<T: Real>(u: &CVec4<T>) -> CVec4<T> {
    let i = Complex::new(T::zero(), T::one());
    // -Sigma_y has entries (0,1) = i, (1,0) = -i on each block
    let uc = vec_conj(u);
    [i * uc[1], -i * uc[0], i * uc[3], -i * uc[2]]
}

fn left_residual<T: Real>(u: &CVec4<T>, omega: &CMat4<T>, lambda: T) -> T {
    let uo = CMat4::vec_mul(u, omega);
    let il = Complex::new(T::zero(), lambda);
    let r: CVec4<T> = std::array::from_fn(|k| uo[k] + il * u[k]);
    let denom = vec_norm(u) * omega.frobenius_norm();
    if denom > T::zero() && denom.is_finite() {
        vec_norm(&r) / denom
    } else {
        T::infinity()
    }
}

fn right_residual<T: Real>(v: &CVec4<T>, omega: &CMat4<T>, lambda: T) -> T {
    let ov = omega.mul_vec(v);
    let il = Complex::new(T::zero(), lambda);
    let r: CVec4<T> = std::array::from_fn(|k| ov[k] + il * v[k]);
    let denom = vec_norm(v) * omega.frobenius_norm();
    if denom > T::zero() {
        vec_norm(&r) / denom
    } else {
        T::infinity()
    }
}

/// Scales `u` so that `u . (-Sigma_y u^dagger) = 1` and rotates its phase so
/// the first non-negligible component is positive imaginary.
fn normalize_left<T: Real>(u: CVec4<T>, phase_threshold: T) -> Option<CVec4<T>> {
    let s = dot(&u, &right_from_left(&u)).re;
    if !(s > T::zero()) {
        return None;
    }
    let k = T::one() / s.sqrt();
    let mut u = u.map(|z| z * k);
    let norm = vec_norm(&u);
    if let Some(first) = u.iter().find(|z| z.norm() > phase_threshold * norm) {
        let phase = Complex::new(T::zero(), T::one()) * first.conj() / first.norm();
        u = u.map(|z| z * phase);
    }
    Some(u)
}

pub fn left_eigenvector<T: Real>(
    cp: &CommutativeParams<T>,
    sd: &SpectralData<T>,
    mode: Mode,
    tol: &Tolerances<T>,
) -> Result<LeftEigenvector<T>> {
    let omega = build_omega(&build_hamiltonian(cp)).to_complex();
    let lambda = sd.lambda(mode);
    let accept = |u: CVec4<T>, source| -> Option<LeftEigenvector<T>> {
        let u = normalize_left(u, tol.identity)?;
        let residual = left_residual(&u, &omega, lambda);
        (residual <= tol.identity).then_some(LeftEigenvector {
            u,
            source,
            residual,
        })
    };

    let closed = closed_form_left_eigenvector(cp, lambda);
    let closed_res = left_residual(&closed, &omega, lambda);
    if closed_res <= tol.identity {
        if let Some(ev) = accept(closed, EigenvectorSource::ClosedForm) {
            return Ok(ev);
        }
    }

    // u (Omega + i lambda) = 0  <=>  (Omega + i lambda)^T u^T = 0
    let il = Complex::new(T::zero(), lambda);
    let shifted = CMat4::from_fn(|i, j| omega[(j, i)] + if i == j { il } else { Complex::new(T::zero(), T::zero()) });
    let fallback = shifted.null_vector();
    let fallback_res = fallback
        .map(|u| left_residual(&u, &omega, lambda))
        .unwrap_or(T::infinity());
    if let Some(ev) = fallback.and_then(|u| accept(u, EigenvectorSource::NullSpace)) {
        return Ok(ev);
    }
    Err(Error::EigenvectorResidualTooLarge {
        mode: mode.number(),
        residual: closed_res.min(fallback_res).as_f64(),
    })
}

pub fn assemble_eigensystem<T: Real>(
    cp: &CommutativeParams<T>,
    sd: &SpectralData<T>,
    tol: &Tolerances<T>,
) -> Result<EigenSystem<T>> {
    let e1 = left_eigenvector(cp, sd, Mode::First, tol)?;
    let e2 = left_eigenvector(cp, sd, Mode::Second, tol)?;
    let u = [e1.u, e2.u];
    let v = [right_from_left(&u[0]), right_from_left(&u[1])];

    let q = CMat4::from_columns([v[0], vec_conj(&v[0]), v[1], vec_conj(&v[1])]);
    let q_inv = CMat4::from_rows([u[0], vec_conj(&u[0]), u[1], vec_conj(&u[1])]);
    let two = T::two();
    let id = CMat4::identity();

    let inverse = (q_inv * q - id).frobenius_norm() / two;
    if !(inverse <= tol.identity) {
        return Err(Error::SingularQ {
            residual: inverse.as_f64(),
        });
    }

    let omega = build_omega(&build_hamiltonian(cp)).to_complex();
    let omega_d = sd.omega_diagonal();
    let od = CMat4::diag(omega_d);
    let lambdas = [sd.lambda1, sd.lambda2];

    let mut biorthogonality = T::zero();
    let mut conjugate_pairing = T::zero();
    for i in 0..2 {
        for j in 0..2 {
            let delta = if i == j { T::one() } else { T::zero() };
            let uv = dot(&u[i], &v[j]);
            biorthogonality = biorthogonality.max((uv - Complex::new(delta, T::zero())).norm());
            let a = dot(&u[i], &vec_conj(&v[j]));
            let b = dot(&vec_conj(&u[i]), &v[j]);
            conjugate_pairing = conjugate_pairing.max((a - b).norm()).max(a.norm());
        }
    }
    let left_eigen = (0..2)
        .map(|k| left_residual(&u[k], &omega, lambdas[k]))
        .fold(T::zero(), T::max);
    let left_right_relation = (0..2)
        .map(|k| right_residual(&v[k], &omega, lambdas[k]))
        .fold(T::zero(), T::max);

    let diagonalization = (q_inv * omega * q - od).frobenius_norm() / od.frobenius_norm();
    let sy = sigma_y::<T>();
    let sz = sigma_z::<T>().to_complex();
    let q_dagger = (q.adjoint() + sz * q_inv * sy).frobenius_norm() / q.frobenius_norm();
    let ladder = (commutator_matrix(&q_inv) - sz).frobenius_norm() / two;

    Ok(EigenSystem {
        u,
        v,
        sources: [e1.source, e2.source],
        q,
        q_inv,
        omega_d,
        sigma: [sd.lambda1, sd.lambda1, sd.lambda2, sd.lambda2],
        hbar: cp.hbar,
        residuals: EigenResiduals {
            biorthogonality,
            conjugate_pairing,
            left_eigen,
            left_right_relation,
            diagonalization,
            q_dagger,
            ladder_commutators: ladder,
            inverse,
        },
    })
}

/// `[zeta_k, zeta_l^dagger]` for `zeta = Q^-1 X`, in units of `hbar`, using
/// `[X_a, X_b] = -(Sigma_y)_ab`. Ordering `(zeta1, zeta1^+, zeta2, zeta2^+)`
/// gives `Sigma_z` for a proper set of ladder operators.
pub fn commutator_matrix<T: Real>(q_inv: &CMat4<T>) -> CMat4<T> {
    let neg_sy = -sigma_y::<T>();
    *q_inv * neg_sy * q_inv.adjoint()
}

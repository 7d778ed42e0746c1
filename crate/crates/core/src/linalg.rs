//! Fixed-size dense matrices for the 2x2 / 4x4 / 8x8 work in this crate.
//!
//! Entries are either a [`Real`] scalar or a `Complex` of one. Nothing here
//! is tuned for size; every matrix in the pipeline is at most 8x8.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Num, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::scalar::Real;

/// Matrix entry: a real scalar or a complex number over one.
pub trait Entry: Copy + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    type Real: Real;
    fn conj(self) -> Self;
    fn modulus_sqr(self) -> Self::Real;
    fn from_real(r: Self::Real) -> Self;

    fn modulus(self) -> Self::Real {
        self.modulus_sqr().sqrt()
    }
}

macro_rules! impl_real_entry {
    ($t:ty) => {
        impl Entry for $t {
            type Real = $t;
            fn conj(self) -> Self {
                self
            }
            fn modulus_sqr(self) -> $t {
                self * self
            }
            fn from_real(r: $t) -> Self {
                r
            }
        }
    };
}

impl_real_entry!(f32);
impl_real_entry!(f64);

impl<T: Real> Entry for Complex<T> {
    type Real = T;
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn modulus_sqr(self) -> T {
        self.norm_sqr()
    }
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
}

/// Square `N x N` matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix<E, const N: usize>(pub [[E; N]; N]);

pub type Mat2<T> = Matrix<T, 2>;
pub type Mat4<T> = Matrix<T, 4>;
pub type CMat4<T> = Matrix<Complex<T>, 4>;
pub type CVec4<T> = [Complex<T>; 4];

impl<E: Entry, const N: usize> Matrix<E, N> {
    pub fn zeros() -> Self {
        Self([[E::zero(); N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { E::one() } else { E::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: [E; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { E::zero() })
    }

    pub fn diagonal(&self) -> [E; N] {
        let mut d = [E::zero(); N];
        for (i, di) in d.iter_mut().enumerate() {
            *di = self.0[i][i];
        }
        d
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn scale(&self, s: E) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> E {
        (0..N).fold(E::zero(), |acc, i| acc + self.0[i][i])
    }

    pub fn frobenius_norm(&self) -> E::Real {
        self.0
            .iter()
            .flatten()
            .fold(E::Real::zero(), |acc, e| acc + e.modulus_sqr())
            .sqrt()
    }

    pub fn max_abs(&self) -> E::Real {
        self.0
            .iter()
            .flatten()
            .fold(E::Real::zero(), |acc, e| acc.max(e.modulus()))
    }

    pub fn column(&self, j: usize) -> [E; N] {
        let mut c = [E::zero(); N];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = self.0[i][j];
        }
        c
    }

    pub fn from_columns(cols: [[E; N]; N]) -> Self {
        Self::from_fn(|i, j| cols[j][i])
    }

    pub fn from_rows(rows: [[E; N]; N]) -> Self {
        Self(rows)
    }

    pub fn mul_vec(&self, x: &[E; N]) -> [E; N] {
        let mut y = [E::zero(); N];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..N).fold(E::zero(), |acc, j| acc + self.0[i][j] * x[j]);
        }
        y
    }

    /// Row vector times matrix, `x^T A`.
    pub fn vec_mul(x: &[E; N], a: &Self) -> [E; N] {
        let mut y = [E::zero(); N];
        for (j, yj) in y.iter_mut().enumerate() {
            *yj = (0..N).fold(E::zero(), |acc, i| acc + x[i] * a.0[i][j]);
        }
        y
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> E {
        let mut a = self.0;
        let mut det = E::one();
        for k in 0..N {
            let p = (k..N)
                .max_by(|&i, &j| {
                    a[i][k]
                        .modulus_sqr()
                        .partial_cmp(&a[j][k].modulus_sqr())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if a[p][k] == E::zero() {
                return E::zero();
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det = det * a[k][k];
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let akj = a[k][j];
                    a[i][j] = a[i][j] - f * akj;
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse with partial pivoting. `None` for an exactly
    /// singular pivot.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for k in 0..N {
            let p = (k..N).max_by(|&i, &j| {
                a[i][k]
                    .modulus_sqr()
                    .partial_cmp(&a[j][k].modulus_sqr())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[p][k] == E::zero() {
                return None;
            }
            a.swap(p, k);
            inv.swap(p, k);
            let pivot = a[k][k];
            for j in 0..N {
                a[k][j] = a[k][j] / pivot;
                inv[k][j] = inv[k][j] / pivot;
            }
            for i in 0..N {
                if i == k {
                    continue;
                }
                let f = a[i][k];
                if f == E::zero() {
                    continue;
                }
                for j in 0..N {
                    let (akj, ikj) = (a[k][j], inv[k][j]);
                    a[i][j] = a[i][j] - f * akj;
                    inv[i][j] = inv[i][j] - f * ikj;
                }
            }
        }
        Some(Self(inv))
    }

    /// A unit-free null vector of a rank `N-1` matrix, by Gaussian
    /// elimination with complete pivoting. The free component is set to one.
    pub fn null_vector(&self) -> Option<[E; N]> {
        let mut a = self.0;
        let mut perm: [usize; N] = std::array::from_fn(|i| i);
        for k in 0..N.saturating_sub(1) {
            let mut best = (k, k);
            let mut best_mod = E::Real::zero();
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, e) in row.iter().enumerate().skip(k) {
                    let m = e.modulus_sqr();
                    if m > best_mod {
                        best_mod = m;
                        best = (i, j);
                    }
                }
            }
            if best_mod == E::Real::zero() {
                return None;
            }
            a.swap(k, best.0);
            for row in a.iter_mut() {
                row.swap(k, best.1);
            }
            perm.swap(k, best.1);
            for i in k + 1..N {
                let f = a[i][k] / a[k][k];
                for j in k..N {
                    let akj = a[k][j];
                    a[i][j] = a[i][j] - f * akj;
                }
            }
        }
        let mut y = [E::zero(); N];
        y[N - 1] = E::one();
        for k in (0..N - 1).rev() {
            let s = (k + 1..N).fold(E::zero(), |acc, j| acc + a[k][j] * y[j]);
            y[k] = -s / a[k][k];
        }
        let mut x = [E::zero(); N];
        for k in 0..N {
            x[perm[k]] = y[k];
        }
        Some(x)
    }
}

impl<T: Real, const N: usize> Matrix<T, N> {
    pub fn to_complex(&self) -> Matrix<Complex<T>, N> {
        Matrix::from_fn(|i, j| Complex::new(self.0[i][j], T::zero()))
    }
}

impl<T: Real, const N: usize> Matrix<Complex<T>, N> {
    pub fn re(&self) -> Matrix<T, N> {
        Matrix::from_fn(|i, j| self.0[i][j].re)
    }

    pub fn im(&self) -> Matrix<T, N> {
        Matrix::from_fn(|i, j| self.0[i][j].im)
    }
}

impl<T: Real, const N: usize> Matrix<T, N> {
    /// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
    /// rotations. Eigenvalues ascend; eigenvectors are the matching columns.
    pub fn symmetric_eigen(&self) -> ([T; N], Self) {
        let mut a = self.0;
        let mut v = Self::identity().0;
        let scale = self.frobenius_norm();
        if scale == T::zero() {
            return ([T::zero(); N], Self(v));
        }
        let target = T::epsilon() * T::epsilon() * scale * scale;
        for _sweep in 0..64 {
            let mut off = T::zero();
            for p in 0..N {
                for q in p + 1..N {
                    off += a[p][q] * a[p][q];
                }
            }
            if off <= target {
                break;
            }
            for p in 0..N {
                for q in p + 1..N {
                    let apq = a[p][q];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (T::two() * apq);
                    let t = if theta.abs() > T::lit(1e150).min(T::max_value().sqrt()) {
                        T::half() / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for row in a.iter_mut() {
                        let (akp, akq) = (row[p], row[q]);
                        row[p] = c * akp - s * akq;
                        row[q] = s * akp + c * akq;
                    }
                    for k in 0..N {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                    for row in v.iter_mut() {
                        let (vkp, vkq) = (row[p], row[q]);
                        row[p] = c * vkp - s * vkq;
                        row[q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: [usize; N] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap_or(std::cmp::Ordering::Equal));
        let vals = std::array::from_fn(|k| a[order[k]][order[k]]);
        let vecs = Self::from_fn(|i, k| v[i][order[k]]);
        (vals, vecs)
    }

    pub fn symmetric_eigenvalues(&self) -> [T; N] {
        self.symmetric_eigen().0
    }

    /// Principal square root of a symmetric positive semi-definite matrix.
    pub fn symmetric_sqrt(&self) -> Self {
        let (vals, vecs) = self.symmetric_eigen();
        let roots = vals.map(|l| l.max(T::zero()).sqrt());
        vecs * Self::diag(roots) * vecs.transpose()
    }

    /// Lower Cholesky factor; `None` unless strictly positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let mut l = Self::zeros();
        for i in 0..N {
            for j in 0..=i {
                let mut s = self.0[i][j];
                for k in 0..j {
                    s -= l.0[i][k] * l.0[j][k];
                }
                if i == j {
                    if s <= T::zero() || !s.is_finite() {
                        return None;
                    }
                    l.0[i][i] = s.sqrt();
                } else {
                    l.0[i][j] = s / l.0[j][j];
                }
            }
        }
        Some(l)
    }
}

/// Eigenvalues (ascending) of a 4x4 Hermitian matrix `A + iB`, computed from
/// the real symmetric embedding `[[A, -B], [B, A]]` whose spectrum is that of
/// the Hermitian matrix with every eigenvalue doubled.
pub fn hermitian_eigenvalues4<T: Real>(h: &CMat4<T>) -> [T; 4] {
    let emb = Matrix::<T, 8>::from_fn(|i, j| {
        let (bi, bj) = (i / 4, j / 4);
        let z = h.0[i % 4][j % 4];
        match (bi, bj) {
            (0, 0) | (1, 1) => z.re,
            (0, 1) => -z.im,
            _ => z.im,
        }
    });
    let vals = emb.symmetric_eigenvalues();
    std::array::from_fn(|k| vals[2 * k])
}

/// Bilinear (unconjugated) product `sum_k a_k b_k`.
pub fn dot<E: Entry, const N: usize>(a: &[E; N], b: &[E; N]) -> E {
    a.iter().zip(b).fold(E::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn vec_norm<E: Entry, const N: usize>(a: &[E; N]) -> E::Real {
    a.iter()
        .fold(E::Real::zero(), |acc, x| acc + x.modulus_sqr())
        .sqrt()
}

pub fn vec_conj<E: Entry, const N: usize>(a: &[E; N]) -> [E; N] {
    a.map(|x| x.conj())
}

impl<E: Entry, const N: usize> Index<(usize, usize)> for Matrix<E, N> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.0[i][j]
    }
}

impl<E: Entry, const N: usize> IndexMut<(usize, usize)> for Matrix<E, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.0[i][j]
    }
}

impl<E: Entry, const N: usize> Mul for Matrix<E, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).fold(E::zero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

impl<E: Entry, const N: usize> Add for Matrix<E, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<E: Entry, const N: usize> Sub for Matrix<E, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<E: Entry, const N: usize> Neg for Matrix<E, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<E: Entry + Serialize, const N: usize> Serialize for Matrix<E, N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(N))?;
        for row in &self.0 {
            seq.serialize_element(&row[..])?;
        }
        seq.end()
    }
}

impl<E: Entry, const N: usize> Default for Matrix<E, N> {
    fn default() -> Self {
        Self::zeros()
    }
}

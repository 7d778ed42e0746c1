//! Wigner function of the ground state and plane slices through it.
//!
//! For the ground state `W(Z) = N exp(-Z^T M Z)` over `Z = (x1, p1, x2, p2)`,
//! where `M` is read off the second moments: position variances weight the
//! momenta and vice versa, and the `x1-p2` / `p1-x2` correlations appear
//! crossed, on the `x1 p2` and `p1 x2` pairs of the opposite moment.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{psi0, CovarianceMatrix, GroundState};
use crate::linalg::{Mat2, Mat4};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseAxis {
    X1,
    P1,
    X2,
    P2,
}

impl PhaseAxis {
    pub const ALL: [PhaseAxis; 4] = [PhaseAxis::X1, PhaseAxis::P1, PhaseAxis::X2, PhaseAxis::P2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseAxis::X1 => "x1",
            PhaseAxis::P1 => "p1",
            PhaseAxis::X2 => "x2",
            PhaseAxis::P2 => "p2",
        }
    }
}

impl fmt::Display for PhaseAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PhaseAxis::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidPlane(format!("unknown phase-space axis `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct WignerForm<T> {
    pub m: Mat4<T>,
    /// Prefactor actually used by [`evaluate`].
    pub norm: T,
    /// `2 / (pi hbar^2)`, kept for reproducing figures drawn with it.
    pub fallback_prefactor: T,
    /// `M` is not positive definite; `norm` falls back to `fallback_prefactor`.
    pub degenerate: bool,
    pub hbar: T,
}

impl<T: Real> WignerForm<T> {
    /// `N pi^2 / sqrt(det M)`, the closed-form integral over phase space.
    pub fn analytic_integral(&self) -> Option<T> {
        (!self.degenerate).then(|| self.norm * T::PI() * T::PI() / self.m.det().sqrt())
    }

    pub fn evaluate(&self, z: &[T; 4]) -> T {
        let q = crate::linalg::dot(z, &self.m.mul_vec(z));
        self.norm * (-q).exp()
    }

    /// `M` entry coupling two phase-space axes.
    pub fn coefficient(&self, a: PhaseAxis, b: PhaseAxis) -> T {
        self.m[(a.index(), b.index())]
    }
}

pub fn wigner_form<T: Real>(cov: &CovarianceMatrix<T>) -> WignerForm<T> {
    let v = cov.v;
    let h = cov.hbar;
    let k = T::two() / (h * h);
    let mut m = Mat4::diag([k * v[(1, 1)], k * v[(0, 0)], k * v[(3, 3)], k * v[(2, 2)]]);
    // x1 p2 carries <p1 x2>, p1 x2 carries <x1 p2>
    m[(0, 3)] = -k * v[(1, 2)];
    m[(3, 0)] = m[(0, 3)];
    m[(1, 2)] = -k * v[(0, 3)];
    m[(2, 1)] = m[(1, 2)];
    finish_form(m, h)
}

/// The illustrative moment set: all variances 1/2 and both
/// cross moments -1/2. It is not a physical state (`det M = 0`).
pub fn illustration_form<T: Real>() -> WignerForm<T> {
    let half = T::half();
    let mut v = Mat4::diag([half; 4]);
    v[(0, 3)] = -half;
    v[(3, 0)] = -half;
    v[(1, 2)] = -half;
    v[(2, 1)] = -half;
    wigner_form(&CovarianceMatrix { v, hbar: T::one() })
}

fn finish_form<T: Real>(m: Mat4<T>, hbar: T) -> WignerForm<T> {
    let eig = m.symmetric_eigenvalues();
    let fallback_prefactor = T::two() / (T::PI() * hbar * hbar);
    let degenerate = !(eig[0] > T::epsilon() * T::lit(64.0) * eig[3].abs());
    let norm = if degenerate {
        fallback_prefactor
    } else {
        m.det().sqrt() / (T::PI() * T::PI())
    };
    WignerForm {
        m,
        norm,
        fallback_prefactor,
        degenerate,
        hbar,
    }
}

/// `count` evenly spaced points from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridAxis<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> GridAxis<T> {
    pub fn new(min: T, max: T, count: usize) -> Result<Self> {
        if count < 2 || !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::EmptyRange(format!("grid {min}:{max}:{count}")));
        }
        Ok(GridAxis { min, max, count })
    }

    pub fn step(&self) -> T {
        (self.max - self.min) / T::lit((self.count - 1) as f64)
    }

    pub fn value(&self, k: usize) -> T {
        self.min + self.step() * T::lit(k as f64)
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.count).map(|k| self.value(k)).collect()
    }
}

/// Parses `min:max:count`.
impl<T: Real> FromStr for GridAxis<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::EmptyRange(format!("expected min:max:count, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        GridAxis::new(T::lit(min), T::lit(max), count)
    }
}

/// A plane through phase space: two free axes, the other two clamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceSpec<T> {
    pub plane: (PhaseAxis, PhaseAxis),
    pub fixed: [(PhaseAxis, T); 2],
    pub axis1: GridAxis<T>,
    pub axis2: GridAxis<T>,
}

impl<T: Real> SliceSpec<T> {
    /// Checks that the free axes are distinct and the fixed axes are exactly
    /// the remaining two. Fixed values default to zero when `fixed` is empty.
    pub fn new(plane: (PhaseAxis, PhaseAxis), fixed: &[(PhaseAxis, T)], axis1: GridAxis<T>, axis2: GridAxis<T>) -> Result<Self> {
        if plane.0 == plane.1 {
            return Err(Error::InvalidPlane(format!("free axes must differ, got {},{}", plane.0, plane.1)));
        }
        let rest: Vec<PhaseAxis> = PhaseAxis::ALL
            .into_iter()
            .filter(|a| *a != plane.0 && *a != plane.1)
            .collect();
        let mut values = [T::zero(); 2];
        for &(axis, v) in fixed {
            let slot = rest.iter().position(|a| *a == axis).ok_or_else(|| {
                Error::InvalidPlane(format!("{axis} is a free axis of the plane and cannot be fixed"))
            })?;
            if fixed.iter().filter(|(a, _)| *a == axis).count() > 1 {
                return Err(Error::InvalidPlane(format!("{axis} fixed twice")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidPlane(format!("{axis} fixed to a non-finite value")));
            }
            values[slot] = v;
        }
        if !fixed.is_empty() && fixed.len() != 2 {
            return Err(Error::InvalidPlane(format!("both of {},{} must be fixed", rest[0], rest[1])));
        }
        Ok(SliceSpec {
            plane,
            fixed: [(rest[0], values[0]), (rest[1], values[1])],
            axis1,
            axis2,
        })
    }

    fn point(&self, a: T, b: T) -> [T; 4] {
        let mut z = [T::zero(); 4];
        z[self.plane.0.index()] = a;
        z[self.plane.1.index()] = b;
        for (axis, v) in self.fixed {
            z[axis.index()] = v;
        }
        z
    }
}

/// Parses `a,b` into a pair of axes.
pub fn parse_plane(s: &str) -> Result<(PhaseAxis, PhaseAxis)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidPlane(format!("expected a,b, got `{s}`")))?;
    Ok((a.parse()?, b.parse()?))
}

/// Parses `c=v,d=v`.
pub fn parse_fixed<T: Real>(s: &str) -> Result<Vec<(PhaseAxis, T)>> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let (a, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidPlane(format!("expected axis=value, got `{part}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPlane(format!("bad value in `{part}`")))?;
            Ok((a.parse()?, T::lit(v)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid<T> {
    pub spec: SliceSpec<T>,
    /// Row-major with axis 1 fastest: `values[j * axis1.count + i]`.
    pub values: Vec<T>,
    pub norm: T,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct GridMetadata<T> {
    pub plane: [PhaseAxis; 2],
    pub fixed: [(PhaseAxis, T); 2],
    pub axis1: GridAxis<T>,
    pub axis2: GridAxis<T>,
    pub layout: &'static str,
    pub prefactor: T,
    /// `normalized` (`sqrt(det M) / pi^2`) or `fallback` (`2 / (pi hbar^2)`).
    pub prefactor_kind: &'static str,
    pub degenerate: bool,
    pub exponent_matrix: Mat4<T>,
    pub min: T,
    pub max: T,
}

impl<T: Real> WignerGrid<T> {
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[j * self.spec.axis1.count + i]
    }

    pub fn metadata(&self, wf: &WignerForm<T>) -> GridMetadata<T> {
        let (min, max) = self
            .values
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        GridMetadata {
            plane: [self.spec.plane.0, self.spec.plane.1],
            fixed: self.spec.fixed,
            axis1: self.spec.axis1,
            axis2: self.spec.axis2,
            layout: "row-major; each CSV row is one axis2 value, axis1 varies along the row",
            prefactor: self.norm,
            prefactor_kind: if self.degenerate { "fallback" } else { "normalized" },
            degenerate: self.degenerate,
            exponent_matrix: wf.m,
            min,
            max,
        }
    }

    /// Matrix layout: one line per axis-2 value.
    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.values.chunks(self.spec.axis1.count) {
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `a b w` triples, blank line between axis-2 blocks (gnuplot `splot`).
    pub fn write_triples<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let xs = self.spec.axis1.values();
        for (j, b) in self.spec.axis2.values().into_iter().enumerate() {
            for (i, a) in xs.iter().enumerate() {
                writeln!(out, "{a:e} {b:e} {:e}", self.at(i, j))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// How far the slice is from a product `f(a) g(b)`: the largest
    /// `|W(a,b) W(a0,b0) - W(a,b0) W(a0,b)|` relative to `max W^2`, with
    /// `(a0, b0)` at the grid maximum.
    pub fn factorization_defect(&self) -> T {
        let (n1, n2) = (self.spec.axis1.count, self.spec.axis2.count);
        let (imax, wmax) = self
            .values
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
        if !(wmax > T::zero()) {
            return T::zero();
        }
        let (i0, j0) = (imax % n1, imax / n1);
        let w00 = self.at(i0, j0);
        let mut worst = T::zero();
        for j in 0..n2 {
            for i in 0..n1 {
                let d = (self.at(i, j) * w00 - self.at(i, j0) * self.at(i0, j)).abs();
                worst = worst.max(d);
            }
        }
        worst / (wmax * wmax)
    }
}

pub fn project<T: Real>(wf: &WignerForm<T>, spec: &SliceSpec<T>) -> WignerGrid<T> {
    let xs = spec.axis1.values();
    let ys = spec.axis2.values();
    let values = ys
        .par_iter()
        .flat_map_iter(|&b| xs.iter().map(move |&a| wf.evaluate(&spec.point(a, b))))
        .collect();
    WignerGrid {
        spec: *spec,
        values,
        norm: wf.norm,
        degenerate: wf.degenerate,
    }
}

/// The six illustrative slices: each free pair with the other
/// two coordinates clamped at 1.
pub fn illustration_planes() -> [(PhaseAxis, PhaseAxis); 6] {
    use PhaseAxis::*;
    [(X1, P1), (X2, P2), (X1, X2), (P1, P2), (X1, P2), (P1, X2)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalComparison<T> {
    pub x1: Vec<T>,
    pub x2: Vec<T>,
    /// Row-major, `x1` fastest.
    pub marginal: Vec<T>,
    pub psi_sq: Vec<T>,
    pub max_deviation: T,
}

/// Integrates `W` over both momenta (trapezoid rule, `n_p` nodes per axis,
/// centred on the conditional mean) and compares with `|psi0|^2`.
pub fn marginal_position<T: Real>(
    wf: &WignerForm<T>,
    gs: &GroundState<T>,
    x1: &GridAxis<T>,
    x2: &GridAxis<T>,
    n_p: usize,
) -> Result<MarginalComparison<T>> {
    if wf.degenerate {
        return Err(Error::DegenerateForm);
    }
    let m = &wf.m;
    // momentum block and its coupling to positions
    let mpp = Mat2::from_rows([[m[(1, 1)], m[(1, 3)]], [m[(3, 1)], m[(3, 3)]]]);
    let mpx = Mat2::from_rows([[m[(1, 0)], m[(1, 2)]], [m[(3, 0)], m[(3, 2)]]]);
    let mpp_inv = mpp.inverse().ok_or(Error::DegenerateForm)?;
    let gain = -(mpp_inv * mpx);
    let width = T::lit(8.0) / mpp.symmetric_eigenvalues()[0].sqrt();
    let n_p = n_p.max(3);
    let dp = T::two() * width / T::lit((n_p - 1) as f64);

    let xs = x1.values();
    let ys = x2.values();
    let marginal: Vec<T> = ys
        .par_iter()
        .flat_map_iter(|&b| {
            let gain = gain;
            xs.iter().map(move |&a| {
                let centre = gain.mul_vec(&[a, b]);
                let mut acc = T::zero();
                for i in 0..n_p {
                    let p1 = centre[0] - width + dp * T::lit(i as f64);
                    let w1 = if i == 0 || i == n_p - 1 { T::half() } else { T::one() };
                    for j in 0..n_p {
                        let p2 = centre[1] - width + dp * T::lit(j as f64);
                        let w2 = if j == 0 || j == n_p - 1 { T::half() } else { T::one() };
                        acc += w1 * w2 * wf.evaluate(&[a, p1, b, p2]);
                    }
                }
                acc * dp * dp
            })
        })
        .collect();
    let psi_sq: Vec<T> = ys
        .iter()
        .flat_map(|&b| xs.iter().map(move |&a| psi0(gs, a, b).norm_sqr()))
        .collect();
    let max_deviation = marginal
        .iter()
        .zip(&psi_sq)
        .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()));
    Ok(MarginalComparison {
        x1: xs,
        x2: ys,
        marginal,
        psi_sq,
        max_deviation,
    })
}

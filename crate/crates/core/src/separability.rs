//! Simon's separability criterion for the two-mode ground state, an
//! independent partial-transpose check, and parameter-space scans.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, ErrorKind, Result};
use crate::gaussian::{covariance, ground_state, CovarianceMatrix};
use crate::linalg::{Mat2, Mat4};
use crate::params::{canonical_commutators, ParamName, PhysicalParams};
use crate::scalar::Real;
use crate::symplectic::spectral_data;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Separable,
    Entangled,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Separable => "separable",
            Verdict::Entangled => "entangled",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which parameter condition, if any, removes the cross term of the state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// No deformation at all.
    Commutative,
    /// Equal bare frequencies.
    EqualFrequencies,
    /// `theta m1 wt1 = eta / (m2 wt2)`.
    Constraint,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptResult<T> {
    /// Smallest symplectic eigenvalue of the partially transposed `V/hbar`.
    pub min_symplectic_eigenvalue: T,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityReport<T> {
    pub det1: T,
    pub det2: T,
    pub det12: T,
    pub trace_term: T,
    pub lhs: T,
    /// `(det1 + det2) / 4`.
    pub rhs: T,
    pub margin: T,
    pub verdict: Verdict,
    /// `|margin|` below the separability tolerance.
    pub boundary: bool,
    /// The right-hand side without the factor 1/4, and the verdict it gives.
    pub rhs_literal: T,
    pub margin_literal: T,
    pub literal_verdict: Verdict,
    pub physicality_min_eigenvalue: T,
    pub reason: Option<Reason>,
    pub ppt: Option<PptResult<T>>,
}

fn j2<T: Real>() -> Mat2<T> {
    Mat2::from_rows([[T::zero(), T::one()], [-T::one(), T::zero()]])
}

pub fn simon_report<T: Real>(cov: &CovarianceMatrix<T>, tol: &Tolerances<T>) -> Result<SeparabilityReport<T>> {
    let phys = cov.physicality_min_eigenvalue();
    if !(phys >= -tol.physicality) {
        return Err(Error::UnphysicalCovariance(phys.as_f64()));
    }
    let s = CovarianceMatrix { v: cov.scaled(), hbar: T::one() };
    let (a, b, c) = (s.v11(), s.v22(), s.v12());
    let j = j2::<T>();
    let c_t = j * c * j;
    let c_t21 = j * c.transpose() * j;

    let det1 = a.det();
    let det2 = b.det();
    let det12 = c.det();
    let trace_term = (a * c_t * b * c_t21).trace();
    let quarter = T::lit(0.25);
    let k = quarter - det12.abs();
    let lhs = det1 * det2 + k * k - trace_term;
    let rhs_literal = det1 + det2;
    let rhs = quarter * rhs_literal;
    let margin = lhs - rhs;
    let margin_literal = lhs - rhs_literal;
    let verdict_of = |m: T| {
        if m >= -tol.separability {
            Verdict::Separable
        } else {
            Verdict::Entangled
        }
    };
    Ok(SeparabilityReport {
        det1,
        det2,
        det12,
        trace_term,
        lhs,
        rhs,
        margin,
        verdict: verdict_of(margin),
        boundary: margin.abs() < tol.separability,
        rhs_literal,
        margin_literal,
        literal_verdict: verdict_of(margin_literal),
        physicality_min_eigenvalue: phys,
        reason: None,
        ppt: None,
    })
}

/// Symplectic spectrum of the partially transposed state, computed without
/// any of the determinant invariants used by [`simon_report`].
pub fn ppt_oracle<T: Real>(cov: &CovarianceMatrix<T>, tol: &Tolerances<T>) -> Result<PptResult<T>> {
    let phys = cov.physicality_min_eigenvalue();
    if !(phys >= -tol.physicality) {
        return Err(Error::UnphysicalCovariance(phys.as_f64()));
    }
    let flip = Mat4::diag([T::one(), T::one(), T::one(), -T::one()]);
    let vt = flip * cov.scaled() * flip;
    // eigenvalues of i J Vt are +-nu_k; those of -(R J R)^2 with R = Vt^(1/2)
    // are nu_k^2, each twice
    let r = vt.symmetric_sqrt();
    let a = r * canonical_commutators() * r;
    let sq = -(a * a);
    let sym = Mat4::from_fn(|i, j| T::half() * (sq[(i, j)] + sq[(j, i)]));
    let nu2 = sym.symmetric_eigenvalues()[0].max(T::zero());
    let nu = nu2.sqrt();
    Ok(PptResult {
        min_symplectic_eigenvalue: nu,
        verdict: if nu >= T::half() - tol.separability {
            Verdict::Separable
        } else {
            Verdict::Entangled
        },
    })
}

pub fn reason<T: Real>(p: &PhysicalParams<T>, tol: &Tolerances<T>) -> Reason {
    let freq_scale = p.wt1.max(p.wt2);
    let lhs = p.theta * p.m1 * p.wt1;
    let rhs = p.eta / (p.m2 * p.wt2);
    if p.theta == T::zero() && p.eta == T::zero() {
        Reason::Commutative
    } else if (p.wt1 - p.wt2).abs() <= tol.constraint * freq_scale {
        Reason::EqualFrequencies
    } else if (lhs - rhs).abs() <= tol.constraint * lhs.max(rhs) {
        Reason::Constraint
    } else {
        Reason::Generic
    }
}

/// Full pipeline from physical parameters to a separability verdict, with
/// the partial-transpose check attached.
pub fn classify<T: Real>(p: &PhysicalParams<T>, tol: &Tolerances<T>) -> Result<SeparabilityReport<T>> {
    p.validate()?;
    let cp = p.to_commutative();
    let sd = spectral_data(&cp, tol)?;
    let gs = ground_state(&cp, &sd, tol)?;
    let cov = covariance(&gs);
    let mut report = simon_report(&cov, tol)?;
    report.ppt = Some(ppt_oracle(&cov, tol)?);
    report.reason = Some(reason(p, tol));
    Ok(report)
}

/// One scan axis: `steps` evenly spaced values from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis<T> {
    pub name: ParamName,
    pub min: T,
    pub max: T,
    pub steps: usize,
}

impl<T: Real> Axis<T> {
    pub fn new(name: ParamName, min: T, max: T, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::EmptyRange(format!("{name}: zero steps")));
        }
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(Error::EmptyRange(format!("{name}: {min}..{max}")));
        }
        if steps > 1 && min == max {
            return Err(Error::EmptyRange(format!("{name}: {steps} steps over a single point")));
        }
        Ok(Axis { name, min, max, steps })
    }

    pub fn value(&self, k: usize) -> T {
        if self.steps == 1 {
            return self.min;
        }
        let t = T::lit(k as f64) / T::lit((self.steps - 1) as f64);
        self.min + (self.max - self.min) * t
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.steps).map(|k| self.value(k)).collect()
    }
}

/// Parses `name=min:max:steps`.
impl<T: Real> FromStr for Axis<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| Error::EmptyRange(format!("expected name=min:max:steps, got `{s}`")))?;
        let name: ParamName = name.trim().parse()?;
        let parts: Vec<&str> = range.split(':').collect();
        let bad = || Error::EmptyRange(format!("expected min:max:steps, got `{range}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        Axis::new(name, T::lit(min), T::lit(max), steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow<T> {
    pub values: Vec<T>,
    pub margin: Option<T>,
    pub verdict: Option<Verdict>,
    pub boundary: bool,
    pub degenerate: bool,
    pub ppt_agrees: Option<bool>,
    /// Message of the failure when `degenerate` is set.
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub separable: usize,
    pub entangled: usize,
    pub boundary: usize,
    pub degenerate: usize,
    pub ppt_disagreements: usize,
}

impl fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} points: {} separable ({} on boundary), {} entangled, {} degenerate, {} PPT disagreements",
            self.points, self.separable, self.boundary, self.entangled, self.degenerate, self.ppt_disagreements
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ScanTable<T> {
    pub axes: Vec<Axis<T>>,
    pub fixed: PhysicalParams<T>,
    pub rows: Vec<ScanRow<T>>,
}

impl<T: Real> ScanTable<T> {
    pub fn summary(&self) -> ScanSummary {
        let mut s = ScanSummary {
            points: self.rows.len(),
            ..Default::default()
        };
        for r in &self.rows {
            match r.verdict {
                Some(Verdict::Separable) => s.separable += 1,
                Some(Verdict::Entangled) => s.entangled += 1,
                None => {}
            }
            s.boundary += r.boundary as usize;
            s.degenerate += r.degenerate as usize;
            s.ppt_disagreements += (r.ppt_agrees == Some(false)) as usize;
        }
        s
    }

    /// Row with the smallest `|margin|`.
    pub fn closest_to_boundary(&self) -> Option<&ScanRow<T>> {
        self.rows
            .iter()
            .filter_map(|r| r.margin.map(|m| (m.abs(), r)))
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(_, r)| r)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.axes.iter().map(|a| a.name.as_str()).collect();
        header.extend(["margin", "verdict", "boundary", "degenerate"]);
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.values.iter().map(|v| format!("{v:e}")).collect();
            rec.push(r.margin.map_or_else(|| "NaN".to_string(), |m| format!("{m:e}")));
            rec.push(r.verdict.map_or("degenerate", Verdict::as_str).to_string());
            rec.push(r.boundary.to_string());
            rec.push(r.degenerate.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Classifies every point of a 1D or 2D grid. Rows come out in row-major
/// order with the last axis varying fastest, however the work is scheduled.
pub fn scan<T: Real>(
    axis1: Axis<T>,
    axis2: Option<Axis<T>>,
    fixed: &PhysicalParams<T>,
    tol: &Tolerances<T>,
) -> Result<ScanTable<T>> {
    let axes: Vec<Axis<T>> = std::iter::once(axis1).chain(axis2).collect();
    if let [a, b] = axes.as_slice() {
        if a.name == b.name {
            return Err(Error::InvalidAxisName(format!("{} given twice", a.name)));
        }
    }
    // range endpoints must be valid parameters; interior points then are too
    for ax in &axes {
        for v in [ax.min, ax.max] {
            let mut p = *fixed;
            p.set(ax.name, v);
            p.validate()?;
        }
    }
    let n2 = axes.get(1).map_or(1, |a| a.steps);
    let total = axis1.steps * n2;
    let rows = (0..total)
        .into_par_iter()
        .map(|k| {
            let idx = [k / n2, k % n2];
            let mut p = *fixed;
            let values: Vec<T> = axes
                .iter()
                .zip(idx)
                .map(|(ax, i)| {
                    let v = ax.value(i);
                    p.set(ax.name, v);
                    v
                })
                .collect();
            scan_point(values, &p, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable {
        axes,
        fixed: *fixed,
        rows,
    })
}

fn scan_point<T: Real>(values: Vec<T>, p: &PhysicalParams<T>, tol: &Tolerances<T>) -> Result<ScanRow<T>> {
    match classify(p, tol) {
        Ok(r) => Ok(ScanRow {
            values,
            margin: Some(r.margin),
            verdict: Some(r.verdict),
            boundary: r.boundary,
            degenerate: false,
            ppt_agrees: r.ppt.map(|x| x.verdict == r.verdict),
            note: None,
        }),
        Err(e) if e.kind() == ErrorKind::Validation => Err(e),
        Err(e) => Ok(ScanRow {
            values,
            margin: None,
            verdict: None,
            boundary: false,
            degenerate: true,
            ppt_agrees: None,
            note: Some(e.to_string()),
        }),
    }
}

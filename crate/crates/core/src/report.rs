//! One-shot analysis of a parameter point, as emitted by `ncosc analyze`.

use serde::Serialize;

use crate::error::Result;
use crate::gaussian::{covariance, energy, ground_state, variance_products, CovarianceMatrix, GroundState};
use crate::params::{CommutativeParams, PhysicalParams};
use crate::scalar::Real;
use crate::separability::{ppt_oracle, reason, simon_report, SeparabilityReport};
use crate::symplectic::{
    assemble_eigensystem, b_from_minors, b_six_coupling_form, build_hamiltonian, build_omega, c_expanded,
    spectral_data, symplectic_residual, EigenResiduals, EigenvectorSource, SpectralData,
};
use crate::szilard::{extractable_work, MeasurementSpec, SzilardResult};
use crate::tolerance::Tolerances;

/// Alternative evaluations of the characteristic-polynomial coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientDiagnostics<T> {
    /// `b` as used for the spectrum.
    pub b: T,
    /// Sum of principal 2x2 minors of `Omega`.
    pub b_from_minors: T,
    /// `w1^2 + w2^2 + 6 nu1 nu2`; differs from `b` whenever both couplings
    /// are nonzero.
    pub b_six_coupling_form: T,
    pub c: T,
    pub c_expanded: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenSummary<T> {
    pub residuals: EigenResiduals<T>,
    pub max_residual: T,
    pub sources: [EigenvectorSource; 2],
    pub symplectic_generator_residual: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct AnalysisReport<T> {
    pub version: &'static str,
    pub tolerances: Tolerances<T>,
    pub input: PhysicalParams<T>,
    pub effective_planck: T,
    pub constraint_residual: T,
    pub commutative: CommutativeParams<T>,
    pub spectrum: SpectralData<T>,
    pub coefficients: CoefficientDiagnostics<T>,
    pub eigensystem: EigenSummary<T>,
    pub ground_state: GroundState<T>,
    pub covariance: CovarianceMatrix<T>,
    pub separability: SeparabilityReport<T>,
    /// `(dx1 dp1, dx2 dp2)`.
    pub variance_products: [T; 2],
    pub ground_energy: T,
    /// Heterodyne measurement at `kT = 1`.
    pub szilard: SzilardResult<T>,
}

/// Runs the whole pipeline and fails if any eigen-system identity misses
/// its tolerance.
pub fn analyze<T: Real>(p: &PhysicalParams<T>, tol: &Tolerances<T>) -> Result<AnalysisReport<T>> {
    p.validate()?;
    let cp = p.to_commutative();
    let sd = spectral_data(&cp, tol)?;
    let qf = build_hamiltonian(&cp);
    let es = assemble_eigensystem(&cp, &sd, tol)?;
    es.residuals.check(tol.identity)?;

    let gs = ground_state(&cp, &sd, tol)?;
    let cov = covariance(&gs);
    cov.check_physical(tol)?;
    let mut sep = simon_report(&cov, tol)?;
    sep.ppt = Some(ppt_oracle(&cov, tol)?);
    sep.reason = Some(reason(p, tol));
    let (vp1, vp2) = variance_products(&gs);
    let szilard = extractable_work(&cov, &MeasurementSpec::heterodyne(), tol)?;

    Ok(AnalysisReport {
        version: env!("CARGO_PKG_VERSION"),
        tolerances: *tol,
        input: *p,
        effective_planck: p.effective_planck(),
        constraint_residual: p.constraint_residual(),
        commutative: cp,
        spectrum: sd,
        coefficients: CoefficientDiagnostics {
            b: sd.b,
            b_from_minors: b_from_minors(&build_omega(&qf)),
            b_six_coupling_form: b_six_coupling_form(&cp),
            c: sd.c,
            c_expanded: c_expanded(&cp),
        },
        eigensystem: EigenSummary {
            residuals: es.residuals,
            max_residual: es.residuals.max(),
            sources: es.sources,
            symplectic_generator_residual: symplectic_residual(&qf),
        },
        ground_state: gs,
        covariance: cov,
        separability: sep,
        variance_products: [vp1, vp2],
        ground_energy: energy(&sd, 0, 0),
        szilard,
    })
}

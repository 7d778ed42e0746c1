use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad user input: parameters, ranges, axis names, measurement settings.
    Validation,
    /// The normal modes coincide or a mode frequency vanishes.
    Degenerate,
    /// A numerical identity or factorization failed its tolerance.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{0}` must be strictly positive and finite")]
    NonPositiveParameter(&'static str),
    #[error("deformation parameter `{0}` must be non-negative and finite")]
    NegativeDeformation(&'static str),
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("eigenvector for mode {mode} failed: residual {residual:e} (closed form and null-space fallback)")]
    EigenvectorResidualTooLarge { mode: usize, residual: f64 },
    #[error("similarity transform is singular: |Q^-1 Q - I| = {residual:e}")]
    SingularQ { residual: f64 },
    #[error("identity check `{name}` failed: residual {residual:e} exceeds {tolerance:e}")]
    IdentityCheckFailed {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },
    #[error("degenerate ground state: delta_lambda = {0:e}")]
    DegenerateGroundState(f64),
    #[error("covariance matrix violates the uncertainty relation (min eigenvalue {0:e})")]
    UnphysicalCovariance(f64),
    #[error("empty range: {0}")]
    EmptyRange(String),
    #[error("invalid axis name `{0}`")]
    InvalidAxisName(String),
    #[error("invalid plane: {0}")]
    InvalidPlane(String),
    #[error("Wigner exponent matrix is not positive definite")]
    DegenerateForm,
    #[error("homodyne limit (mu = 0) is not supported")]
    HomodyneUnsupported,
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("V22 + gamma is singular (det = {0:e})")]
    SingularMeasurement(f64),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NonPositiveParameter(_)
            | NegativeDeformation(_)
            | EmptyRange(_)
            | InvalidAxisName(_)
            | InvalidPlane(_)
            | HomodyneUnsupported
            | InvalidMeasurement(_) => ErrorKind::Validation,
            DegenerateSpectrum(_) | DegenerateGroundState(_) => ErrorKind::Degenerate,
            EigenvectorResidualTooLarge { .. }
            | SingularQ { .. }
            | IdentityCheckFailed { .. }
            | UnphysicalCovariance(_)
            | DegenerateForm
            | SingularMeasurement(_) => ErrorKind::Numerical,
        }
    }
}

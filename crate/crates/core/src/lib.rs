//! Two coupled harmonic oscillators on a noncommutative phase space.
//!
//! The pipeline maps deformed physical parameters onto an equivalent
//! commutative Hamiltonian, diagonalizes it in closed form, builds the
//! Gaussian ground state and its covariance matrix, and from there answers
//! questions about entanglement, Wigner functions and measurement-based work
//! extraction.
//!
//! Everything is generic over the scalar type (`f32` or `f64`); the `*64`
//! aliases at the crate root are the double-precision instantiations.

pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod params;
pub mod report;
pub mod scalar;
pub mod separability;
pub mod symplectic;
pub mod szilard;
pub mod tolerance;
pub mod wigner;

pub use error::{Error, ErrorKind, Result};
pub use gaussian::{covariance, ground_state, CovarianceMatrix, GroundState};
pub use params::{CommutativeParams, ParamName, PhysicalParams};
pub use report::{analyze, AnalysisReport};
pub use scalar::Real;
pub use separability::{classify, ppt_oracle, simon_report, SeparabilityReport, Verdict};
pub use symplectic::{assemble_eigensystem, build_hamiltonian, build_omega, spectral_data, EigenSystem, SpectralData};
pub use szilard::{extractable_work, MeasurementSpec};
pub use tolerance::Tolerances;
pub use wigner::{wigner_form, PhaseAxis, WignerForm};

pub type PhysicalParams64 = PhysicalParams<f64>;
pub type CommutativeParams64 = CommutativeParams<f64>;
pub type SpectralData64 = SpectralData<f64>;
pub type EigenSystem64 = EigenSystem<f64>;
pub type GroundState64 = GroundState<f64>;
pub type CovarianceMatrix64 = CovarianceMatrix<f64>;
pub type SeparabilityReport64 = SeparabilityReport<f64>;
pub type WignerForm64 = WignerForm<f64>;
pub type AnalysisReport64 = AnalysisReport<f64>;
pub type Tolerances64 = Tolerances<f64>;

pub type PhysicalParams32 = PhysicalParams<f32>;
pub type Tolerances32 = Tolerances<f32>;

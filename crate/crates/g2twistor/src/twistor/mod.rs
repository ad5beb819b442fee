//! The paper-specific constructions: the power-law distribution family, the
//! explicit twistor coframe, the Lie contact data, symmetry catalogs and
//! verification, prolongation lifts, the boundary contact reduction, and the
//! exterior-differential-system solver with curvature extraction.

pub mod backend;
pub mod boundary;
pub mod catalog;
pub mod closure;
pub mod coframe;
pub mod connection;
pub mod contact;
pub mod fixtures;
pub mod prolong;
pub mod symmetry;

pub use backend::{build_distribution, PowerLawBackend};
pub use boundary::{boundary_reduction, BoundaryData};
pub use catalog::{catalog, CatalogName, SymmetryCatalog};
pub use closure::{vf_closure, VfAlgebra};
pub use coframe::{build_theta_coframe, CoframeFamily};
pub use connection::{solve_connection_forms, ConnectionForms, CurvatureCoefficients};
pub use contact::{build_contact_data, LieContactData};
pub use prolong::prolong_symmetry;
pub use symmetry::{verify_symmetry, SymmetryKind, Verification};

use crate::geomcalc::GeomError;
use crate::liealg::LieError;
use crate::scalar::ScalarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TwistorError {
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("transcription self-check failed: {0}")]
    TranscriptionSelfCheckFailed(String),
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
    #[error("verification data does not match the requested kind: {0}")]
    KindMismatch(String),
    #[error("not a symmetry: {0}")]
    NotASymmetry(String),
    #[error("prolongation sign calibration failed")]
    SignCalibrationFailed,
    #[error("incompatible parameters: {0}")]
    IncompatibleParameters(String),
    #[error("verification failed for generator {0} (transcription alarm)")]
    VerificationFailed(String),
    #[error("not closed under brackets: {0}")]
    NotClosed(String),
    #[error("boundary match failed: {0}")]
    MatchFailed(String),
    #[error("structure equations inconsistent: {0}")]
    Inconsistent(String),
    #[error("curvature coefficients depend on free solution parameters: {0}")]
    AmbiguousCurvature(String),
    #[error("fixture error: {0}")]
    FixtureError(String),
    #[error("dependent generator list")]
    DependentInput,
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

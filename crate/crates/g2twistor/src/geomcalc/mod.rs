//! Chart-based exterior and symmetric tensor calculus over the exact
//! rational-function field.

pub mod curvature;
pub mod form;
pub mod literal;
pub mod map;
pub mod sym;
pub mod vector;

pub use curvature::{metric_matrix, weyl_tensor, CurvatureData, FourTensor};
pub use form::DiffForm;
pub use literal::{parse_one_form, parse_sym_tensor, parse_vector_field};
pub use map::ChartMap;
pub use sym::{proportional_mod, PropMod, SymTensor};
pub use vector::{generic_rank, lie_bracket, span_growth, VectorField};

use crate::scalar::ScalarError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("substitution failed: {0}")]
    SubstitutionError(String),
    #[error("cannot eliminate `{0}`: its coefficient in the form is zero")]
    NotEliminable(String),
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

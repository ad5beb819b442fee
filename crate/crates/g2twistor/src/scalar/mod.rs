//! Exact scalar arithmetic, expression parsing, and exact linear algebra.
//!
//! The scalar of the whole toolkit is [`RatExpr`]: a reduced fraction of
//! multivariate polynomials over ℚ(6^{1/3}) on a chart, where exactly one
//! distinguished chart variable may carry rational exponents. The zero test is
//! structural, so every identity in the crate is decided exactly.

pub mod chart;
pub mod coef;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratexpr;

pub use chart::{charts, Chart};
pub use coef::{nth_root_exact, rat, rint, Coef, Rat};
pub use matrix::{exact_linear_solve, signature_of_symmetric, LinSolve, Matrix, QMat, RMat};
pub use parse::{bindings, parse_scalar, Bindings};
pub use poly::{exp_int, Exp, Monomial, Poly};
pub use ratexpr::{eval_at, pow_fractional, RatExpr};

use thiserror::Error;

/// Errors of the scalar layer.
#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("fractional exponent on non-distinguished variable `{0}`")]
    FractionalExponentOnNonDistinguishedVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("illegal fractional substitution: {0}")]
    IllegalFractionalSubstitution(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
}

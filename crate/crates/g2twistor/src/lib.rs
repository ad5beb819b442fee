//! Exact symbolic toolkit for split-G₂ geometry.
//!
//! The crate machine-verifies, in exact arithmetic, the linked family of
//! geometries around the split real form of g₂:
//!
//! - the split octonions, their cross product and the compatibility between
//!   the invariant 3-form Φ and the signature (3,4) bilinear form H
//!   ([`octonion`]);
//! - explicit 7×7 matrix models of so(3,4) and g₂ with gradings, Killing
//!   forms and the Kostant codifferential ([`liealg`]);
//! - the orbit classification of totally null 2-planes ([`octonion`]);
//! - chart-based exterior calculus over an exact rational-function field
//!   ([`geomcalc`]);
//! - the twistor construction that turns a power-law (2,3,5)-distribution
//!   into a Lie contact structure on a 7-manifold, its symmetry algebras,
//!   the boundary contact reduction, and the exterior differential system
//!   with its curvature coefficients ([`twistor`]).
//!
//! Everything is computed over exact rationals (with the two adjoined
//! radicals 6^{1/3}, 6^{2/3}); there is no floating point anywhere.
//!
//! See the `examples/` directory for one runnable example per capability and
//! the `g2twistor` binary for batch check suites with JSON reports.

pub mod geomcalc;
pub mod liealg;
pub mod octonion;
pub mod twistor;
pub mod scalar;

pub use scalar::ScalarError;

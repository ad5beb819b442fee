//! Symmetry verification for the four geometric structures: distributions,
//! conformal metrics, Lie contact pairs, and the boundary contact pairs.

use crate::geomcalc::{lie_bracket, proportional_mod, DiffForm, PropMod, SymTensor, VectorField};
use crate::scalar::{exact_linear_solve, LinSolve, Matrix, RatExpr};
use crate::twistor::TwistorError;

/// Data for a verification request.
pub enum SymmetryKind<'a> {
    /// [X, ξᵢ] ∈ span(ξ₁, ξ₂).
    Distribution {
        xi1: &'a VectorField,
        xi2: &'a VectorField,
    },
    /// L_X g = φ g for an exact scalar φ.
    Conformal { metric: &'a SymTensor },
    /// (L_X λ) ∧ λ = 0 and L_X Υ = f Υ mod λ.
    LieContact {
        lambda: &'a DiffForm,
        upsilon: &'a SymTensor,
        solve_var: &'a str,
    },
    /// Same equations on the 5-dimensional boundary pair.
    G2Contact {
        lambda: &'a DiffForm,
        upsilon: &'a SymTensor,
        solve_var: &'a str,
    },
}

/// Verification outcome: a pass with the structure scalar (the conformal
/// factor φ, or the contact factor f), or a failure certificate.
#[derive(Clone, Debug)]
pub enum Verification {
    Pass { factor: Option<RatExpr> },
    Fail { certificate: String },
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass { .. })
    }
}

pub fn verify_symmetry(
    x: &VectorField,
    kind: &SymmetryKind<'_>,
) -> Result<Verification, TwistorError> {
    match kind {
        SymmetryKind::Distribution { xi1, xi2 } => {
            if xi1.chart != x.chart || xi2.chart != x.chart {
                return Err(TwistorError::KindMismatch(
                    "distribution generators on a different chart".to_string(),
                ));
            }
            for xi in [xi1, xi2] {
                let br = lie_bracket(x, xi)?;
                // Solve br = c1 ξ1 + c2 ξ2 over the function field.
                let n = x.chart.dim();
                let mut a = Matrix::filled(n, 2, RatExpr::zero(&x.chart));
                for i in 0..n {
                    *a.at_mut(i, 0) = xi1.comps[i].clone();
                    *a.at_mut(i, 1) = xi2.comps[i].clone();
                }
                match exact_linear_solve(&a, &br.comps).map_err(TwistorError::Scalar)? {
                    LinSolve::Unique(_) | LinSolve::Affine { .. } => {}
                    LinSolve::Inconsistent { .. } => {
                        return Ok(Verification::Fail {
                            certificate: format!(
                                "[X, xi] escapes the span; bracket = {:?}",
                                br.comps
                                    .iter()
                                    .map(|c| format!("{c}"))
                                    .collect::<Vec<_>>()
                            ),
                        })
                    }
                }
            }
            Ok(Verification::Pass { factor: None })
        }
        SymmetryKind::Conformal { metric } => {
            if metric.chart != x.chart {
                return Err(TwistorError::KindMismatch(
                    "metric on a different chart".to_string(),
                ));
            }
            let lg = metric.lie_derivative(x)?;
            match lg.multiple_of(metric) {
                Some(phi) => Ok(Verification::Pass { factor: Some(phi) }),
                None => Ok(Verification::Fail {
                    certificate: "L_X g is not a scalar multiple of g".to_string(),
                }),
            }
        }
        SymmetryKind::LieContact {
            lambda,
            upsilon,
            solve_var,
        }
        | SymmetryKind::G2Contact {
            lambda,
            upsilon,
            solve_var,
        } => {
            if lambda.chart != x.chart || upsilon.chart != x.chart {
                return Err(TwistorError::KindMismatch(
                    "contact data on a different chart".to_string(),
                ));
            }
            let ll = lambda.lie_derivative(x)?;
            let contact_cond = ll.wedge(lambda)?;
            if !contact_cond.is_zero() {
                return Ok(Verification::Fail {
                    certificate: "(L_X lambda) ∧ lambda ≠ 0".to_string(),
                });
            }
            let lu = upsilon.lie_derivative(x)?;
            match proportional_mod(&lu, upsilon, lambda, solve_var)? {
                PropMod::Yes { factor } => Ok(Verification::Pass {
                    factor: Some(factor),
                }),
                PropMod::No { certificate } => Ok(Verification::Fail {
                    certificate: format!(
                        "L_X Upsilon ≠ f·Upsilon mod lambda; conflicting monomials {certificate:?}"
                    ),
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{charts, rint};
    use crate::twistor::backend::PowerLawBackend;
    use crate::twistor::fixtures::fixtures;

    #[test]
    fn distribution_symmetries_pass_and_fail() {
        let k = rint(3);
        let backend = PowerLawBackend::new(&k).unwrap();
        let (xi1, xi2) = backend.distribution();
        let kind = SymmetryKind::Distribution {
            xi1: &xi1,
            xi2: &xi2,
        };
        let b = backend.bindings();
        let x7 = fixtures().vector_field("X7", &b).unwrap();
        assert!(verify_symmetry(&x7, &kind).unwrap().passed());
        // ∂y is a symmetry; y∂x is not.
        let c = charts::m5();
        let dy = VectorField::partial(&c, "y").unwrap();
        assert!(verify_symmetry(&dy, &kind).unwrap().passed());
        let bad = VectorField::partial(&c, "x")
            .unwrap()
            .scale(&RatExpr::var(&c, "y").unwrap());
        assert!(!verify_symmetry(&bad, &kind).unwrap().passed());
    }
}

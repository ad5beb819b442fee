//! Matrix models of so(3,4) and g₂: brackets, Killing forms, gradings,
//! stabilizers, and the Kostant codifferential.

pub mod basis;
pub mod kostant;
pub mod models;

pub use basis::{
    algebra_closure, g2_grading, grading_split, so34_grading_generic, so34_grading_special,
    try_algebra_closure, AlgebraBasis, Closure, GradingLadder, GradingSpec, MatAlgElem,
};
pub use kostant::{dual_basis, CodifferentialContext, Cochain1, Cochain2};
pub use models::{act_on_threeform, build_models, BilinearForm, ThreeForm};

use crate::scalar::{Matrix, QMat, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("elements are linearly dependent")]
    DependentInput,
    #[error("not closed under brackets: {witness}")]
    NotClosed { witness: String },
    #[error("grading violated: [g_{i}, g_{j}] hits degree {actual}, expected {expected} (component {k})")]
    GradingViolation {
        i: usize,
        j: usize,
        k: usize,
        expected: i32,
        actual: i32,
    },
    #[error("bases are not Killing-dual: {0}")]
    NonDualBases(String),
}

/// The kernel of A ↦ ρ(A)Φ inside the span of `ambient`, returned as a closed
/// algebra with structure constants.
pub fn stabilizer_of_threeform(
    phi: &ThreeForm,
    ambient: &AlgebraBasis,
) -> Result<AlgebraBasis, LieError> {
    let n = ambient.dim();
    // 35 × n matrix of the actions of the basis elements.
    let mut m = Matrix::filled(35, n, Rat::zero());
    for (j, e) in ambient.elements.iter().enumerate() {
        let acted = act_on_threeform(&e.mat, phi);
        for (i, v) in acted.to_vector().into_iter().enumerate() {
            *m.at_mut(i, j) = v;
        }
    }
    let kernel = m.kernel();
    let elems: Vec<MatAlgElem> = kernel
        .iter()
        .enumerate()
        .map(|(idx, coords)| MatAlgElem {
            mat: ambient.element_from_coords(coords),
            label: Some(format!("stab{idx}")),
        })
        .collect();
    algebra_closure(elems)
}

/// Convenience: vectorize a square matrix (used by span computations in tests).
pub fn vectorize(m: &QMat) -> Vec<Rat> {
    m.data.clone()
}

/// The standard models, built once and shared.
pub fn models() -> &'static (BilinearForm, ThreeForm, AlgebraBasis, AlgebraBasis) {
    static MODELS: std::sync::OnceLock<(BilinearForm, ThreeForm, AlgebraBasis, AlgebraBasis)> =
        std::sync::OnceLock::new();
    MODELS.get_or_init(|| build_models().expect("standard models are consistent"))
}

/// Rank of the span of a list of matrices.
pub fn span_rank(mats: &[QMat]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let cols = mats.len();
    let rows = mats[0].data.len();
    let mut m = Matrix::filled(rows, cols, Rat::zero());
    for (j, mat) in mats.iter().enumerate() {
        for (i, v) in mat.data.iter().enumerate() {
            *m.at_mut(i, j) = v.clone();
        }
    }
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::signature_of_symmetric;

    #[test]
    fn stabilizer_is_g2() {
        let (_h, phi, so34, g2) = build_models().unwrap();
        let stab = stabilizer_of_threeform(&phi, &so34).unwrap();
        assert_eq!(stab.dim(), 14);
        assert_eq!(
            signature_of_symmetric(&stab.killing).unwrap(),
            (8, 6, 0)
        );
        // Same span as the printed g2 basis: mutual membership.
        let mut all: Vec<QMat> = stab.elements.iter().map(|e| e.mat.clone()).collect();
        assert_eq!(span_rank(&all), 14);
        all.extend(g2.elements.iter().map(|e| e.mat.clone()));
        assert_eq!(span_rank(&all), 14);
    }

    #[test]
    fn g2_inside_so34_dimension() {
        let (_h, _phi, so34, g2) = build_models().unwrap();
        let coords: Vec<Vec<Rat>> = g2
            .elements
            .iter()
            .map(|e| so34.coords_of(&e.mat).expect("inclusion"))
            .collect();
        let mut m = Matrix::filled(21, 14, Rat::zero());
        for (j, c) in coords.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        assert_eq!(m.rank(), 14);
    }
}

//! Algebra bases: exact structure constants, Killing forms, closure checks,
//! gradings and filtrations.

use num_traits::Zero;

use crate::liealg::LieError;
use crate::scalar::{exact_linear_solve, signature_of_symmetric, LinSolve, Matrix, QMat, Rat};

/// An element of a matrix Lie algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct MatAlgElem {
    pub mat: QMat,
    pub label: Option<String>,
}

impl MatAlgElem {
    pub fn bracket(&self, other: &MatAlgElem) -> QMat {
        bracket_mat(&self.mat, &other.mat)
    }
}

pub fn bracket_mat(a: &QMat, b: &QMat) -> QMat {
    let ab = a.mul_mat(b);
    let ba = b.mul_mat(a);
    let mut out = ab;
    for i in 0..out.data.len() {
        let v = out.data[i].clone() - &ba.data[i];
        out.data[i] = v;
    }
    out
}

pub fn mat_to_vec(m: &QMat) -> Vec<Rat> {
    m.data.clone()
}

fn mat_is_zero(m: &QMat) -> bool {
    m.data.iter().all(|x| x.is_zero())
}

/// A basis of a matrix Lie algebra with verified structure constants
/// c[i][j][k] for [e_i, e_j] = Σ_k c[i][j][k] e_k, and the Killing matrix
/// killing[i][j] = tr(ad e_i ∘ ad e_j).
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub elements: Vec<MatAlgElem>,
    pub sc: Vec<Vec<Vec<Rat>>>,
    pub killing: QMat,
}

/// Result of a closure check on a list of elements.
pub enum Closure {
    Closed(AlgebraBasis),
    NotClosed {
        i: usize,
        j: usize,
        residual: QMat,
    },
}

/// Verify linear independence, close under brackets, and compute structure
/// constants and Killing form. Fails with `DependentInput` on a dependent
/// list and reports the first offending pair when a bracket escapes the span.
pub fn try_algebra_closure(elements: Vec<MatAlgElem>) -> Result<Closure, LieError> {
    let n = elements.len();
    assert!(n > 0, "empty element list");
    let dim_amb = elements[0].mat.rows * elements[0].mat.cols;
    // Span matrix: columns are vectorized basis elements.
    let mut span = Matrix::filled(dim_amb, n, Rat::zero());
    for (j, e) in elements.iter().enumerate() {
        for (i, v) in mat_to_vec(&e.mat).into_iter().enumerate() {
            *span.at_mut(i, j) = v;
        }
    }
    if span.rank() != n {
        return Err(LieError::DependentInput);
    }
    let mut sc = vec![vec![vec![Rat::zero(); n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let br = elements[i].bracket(&elements[j]);
            let rhs = mat_to_vec(&br);
            match exact_linear_solve(&span, &rhs).map_err(|e| {
                LieError::InvariantViolation(format!("span solve failed: {e}"))
            })? {
                LinSolve::Unique(c) => {
                    for (k, v) in c.into_iter().enumerate() {
                        sc[j][i][k] = -v.clone();
                        sc[i][j][k] = v;
                    }
                }
                LinSolve::Affine { particular, .. } => {
                    // Independent columns make this impossible, keep it total.
                    for (k, v) in particular.into_iter().enumerate() {
                        sc[j][i][k] = -v.clone();
                        sc[i][j][k] = v;
                    }
                }
                LinSolve::Inconsistent { .. } => {
                    return Ok(Closure::NotClosed {
                        i,
                        j,
                        residual: br,
                    });
                }
            }
        }
    }
    // Killing form from the adjoint representation.
    let killing = killing_from_sc(&sc);
    Ok(Closure::Closed(AlgebraBasis {
        elements,
        sc,
        killing,
    }))
}

/// Closure that treats escape from the span as an error.
pub fn algebra_closure(elements: Vec<MatAlgElem>) -> Result<AlgebraBasis, LieError> {
    match try_algebra_closure(elements)? {
        Closure::Closed(b) => Ok(b),
        Closure::NotClosed { i, j, .. } => Err(LieError::NotClosed {
            witness: format!("bracket of elements {i} and {j} escapes the span"),
        }),
    }
}

pub fn killing_from_sc(sc: &[Vec<Vec<Rat>>]) -> QMat {
    let n = sc.len();
    let mut killing = Matrix::filled(n, n, Rat::zero());
    for i in 0..n {
        for j in i..n {
            let mut acc = Rat::zero();
            // tr(ad_i ∘ ad_j) = Σ_{l,k} c[i][k][l] c[j][l][k]
            for l in 0..n {
                for k in 0..n {
                    if !sc[i][k][l].is_zero() {
                        acc += sc[i][k][l].clone() * &sc[j][l][k];
                    }
                }
            }
            *killing.at_mut(i, j) = acc.clone();
            *killing.at_mut(j, i) = acc;
        }
    }
    killing
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Reconstruct a matrix from basis coordinates.
    pub fn element_from_coords(&self, coords: &[Rat]) -> QMat {
        let shape = &self.elements[0].mat;
        let mut out = Matrix::filled(shape.rows, shape.cols, Rat::zero());
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, v) in self.elements[j].mat.data.iter().enumerate() {
                let d = out.data[i].clone() + v.clone() * c;
                out.data[i] = d;
            }
        }
        out
    }

    /// Coordinates of a matrix in this basis, if it lies in the span.
    pub fn coords_of(&self, m: &QMat) -> Option<Vec<Rat>> {
        let n = self.dim();
        let dim_amb = m.rows * m.cols;
        let mut span = Matrix::filled(dim_amb, n, Rat::zero());
        for (j, e) in self.elements.iter().enumerate() {
            for (i, v) in e.mat.data.iter().enumerate() {
                *span.at_mut(i, j) = v.clone();
            }
        }
        match exact_linear_solve(&span, &m.data).ok()? {
            LinSolve::Unique(c) => Some(c),
            LinSolve::Affine { particular, .. } => Some(particular),
            LinSolve::Inconsistent { .. } => None,
        }
    }

    /// Bracket in basis coordinates.
    pub fn bracket_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    if !self.sc[i][j][k].is_zero() {
                        out[k] += x[i].clone() * &y[j] * &self.sc[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Killing pairing of coordinate vectors.
    pub fn killing_pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let ky = self.killing.mul_vec(y);
        let mut acc = Rat::zero();
        for i in 0..self.dim() {
            acc += x[i].clone() * &ky[i];
        }
        acc
    }

    /// Exact Jacobi identity on all basis triples.
    pub fn verify_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for r in 0..n {
                        let mut acc = Rat::zero();
                        for m in 0..n {
                            acc += self.sc[i][j][m].clone() * &self.sc[m][k][r];
                            acc += self.sc[j][k][m].clone() * &self.sc[m][i][r];
                            acc += self.sc[k][i][m].clone() * &self.sc[m][j][r];
                        }
                        if !acc.is_zero() {
                            return Err(LieError::InvariantViolation(format!(
                                "Jacobi fails on triple ({i},{j},{k}) component {r}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Killing form ad-invariance on basis triples:
    /// κ([x,y],z) + κ(y,[x,z]) = 0.
    pub fn verify_killing_invariance(&self) -> Result<(), LieError> {
        let n = self.dim();
        let basis: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::from_integer(1.into());
                v
            })
            .collect();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy = self.bracket_coords(&basis[x], &basis[y]);
                    let xz = self.bracket_coords(&basis[x], &basis[z]);
                    let s = self.killing_pair(&xy, &basis[z]) + self.killing_pair(&basis[y], &xz);
                    if !s.is_zero() {
                        return Err(LieError::InvariantViolation(format!(
                            "Killing form not ad-invariant at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn killing_signature(&self) -> (usize, usize, usize) {
        signature_of_symmetric(&self.killing).expect("killing matrix is symmetric")
    }

    /// Dimension of the center.
    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        // Rows: all brackets with basis elements; x in the center iff ad(x) = 0.
        let mut m = Matrix::filled(n * n, n, Rat::zero());
        for j in 0..n {
            for l in 0..n {
                for k in 0..n {
                    // component k of [e_j, e_l]
                    *m.at_mut(l * n + k, j) = self.sc[j][l][k].clone();
                }
            }
        }
        m.kernel().len()
    }
}

/// A degree assignment to basis elements, inducing the filtration
/// g^i = ⊕_{j ≥ i} g_j.
#[derive(Clone, Debug)]
pub struct GradingSpec {
    pub degrees: Vec<i32>,
}

/// A verified grading: the ladder of homogeneous dimensions and the parabolic
/// (non-negative) part.
#[derive(Clone, Debug)]
pub struct GradingLadder {
    pub degrees: Vec<i32>,
    pub min_degree: i32,
    pub max_degree: i32,
    /// Basis indices per degree, from min_degree upward.
    pub layers: Vec<Vec<usize>>,
    /// Indices of the parabolic p = g^0.
    pub parabolic: Vec<usize>,
    /// Indices of p₊ = g^1.
    pub p_plus: Vec<usize>,
}

impl GradingLadder {
    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.len()).collect()
    }
}

/// Verify [g_i, g_j] ⊆ g_{i+j} exactly and return the filtration ladder.
pub fn grading_split(basis: &AlgebraBasis, spec: &GradingSpec) -> Result<GradingLadder, LieError> {
    let n = basis.dim();
    assert_eq!(spec.degrees.len(), n, "degree per basis element");
    for i in 0..n {
        for j in 0..n {
            let target = spec.degrees[i] + spec.degrees[j];
            for k in 0..n {
                if !basis.sc[i][j][k].is_zero() && spec.degrees[k] != target {
                    return Err(LieError::GradingViolation {
                        i,
                        j,
                        k,
                        expected: target,
                        actual: spec.degrees[k],
                    });
                }
            }
        }
    }
    let min_degree = *spec.degrees.iter().min().unwrap();
    let max_degree = *spec.degrees.iter().max().unwrap();
    let mut layers = Vec::new();
    for d in min_degree..=max_degree {
        layers.push(
            (0..n)
                .filter(|&i| spec.degrees[i] == d)
                .collect::<Vec<_>>(),
        );
    }
    let parabolic = (0..n).filter(|&i| spec.degrees[i] >= 0).collect();
    let p_plus = (0..n).filter(|&i| spec.degrees[i] >= 1).collect();
    Ok(GradingLadder {
        degrees: spec.degrees.clone(),
        min_degree,
        max_degree,
        layers,
        parabolic,
        p_plus,
    })
}

/// Degrees of the g₂ parameters (b0..b6, q1..q7) in the contact grading of
/// g₂ determined by the stabilized null line.
pub fn g2_grading() -> GradingSpec {
    GradingSpec {
        degrees: vec![-2, -3, -3, -1, -1, 1, 1, 0, 0, 0, 0, 2, 3, 3],
    }
}

/// Degrees of the so(3,4) parameters for the parabolic stabilizing the
/// special null plane span(e₁,e₂) (block sizes 2+3+2).
pub fn so34_grading_special() -> GradingSpec {
    GradingSpec {
        degrees: vec![
            -1, -2, 0, 0, -1, -1, 1, 0, -1, 1, 0, 1, -1, 0, -1, 1, 1, 0, 0, 2, 1,
        ],
    }
}

/// Degrees of the so(3,4) parameters for the Lie contact parabolic, the
/// stabilizer of the generic null plane span(e₂,e₃).
pub fn so34_grading_generic() -> GradingSpec {
    GradingSpec {
        degrees: vec![
            -2, -1, -1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2,
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::models::build_models;
    use crate::scalar::rint;

    #[test]
    fn closure_dimensions_and_signatures() {
        let (_h, _phi, so34, g2) = build_models().unwrap();
        assert_eq!(so34.dim(), 21);
        assert_eq!(g2.dim(), 14);
        assert_eq!(g2.killing_signature(), (8, 6, 0));
        assert_eq!(so34.killing_signature(), (12, 9, 0));
        assert_eq!(g2.center_dim(), 0);
        assert_eq!(so34.center_dim(), 0);
    }

    #[test]
    fn gradings_verify_with_expected_dims() {
        let (_h, _phi, so34, g2) = build_models().unwrap();
        let lg = grading_split(&g2, &g2_grading()).unwrap();
        assert_eq!(lg.layer_dims(), vec![2, 1, 2, 4, 2, 1, 2]);
        let ls1 = grading_split(&so34, &so34_grading_special()).unwrap();
        assert_eq!(ls1.layer_dims(), vec![1, 6, 7, 6, 1]);
        let ls = grading_split(&so34, &so34_grading_generic()).unwrap();
        assert_eq!(ls.layer_dims(), vec![1, 6, 7, 6, 1]);
        assert_eq!(ls.p_plus.len(), 7);
    }

    #[test]
    fn grading_violation_detected() {
        let (_h, _phi, _so34, g2) = build_models().unwrap();
        // Perturb one degree: b0 really has degree −2.
        let mut bad = g2_grading();
        bad.degrees[0] = 0;
        assert!(matches!(
            grading_split(&g2, &bad),
            Err(LieError::GradingViolation { .. })
        ));
    }

    #[test]
    fn dependent_input_rejected() {
        let (_h, _phi, _so34, g2) = build_models().unwrap();
        let mut elems = vec![g2.elements[0].clone(), g2.elements[0].clone()];
        elems[1].label = Some("dup".into());
        assert!(matches!(
            try_algebra_closure(elems),
            Err(LieError::DependentInput)
        ));
    }

    #[test]
    fn not_closed_witness() {
        let (_h, _phi, _so34, g2) = build_models().unwrap();
        // q1-element (index 7) and b1-element (index 1): their bracket is a
        // multiple of b1, inside the span; pick q5 (11) and b0 (0) instead:
        // [g2, g2] coordinates escape a 2-element span.
        let elems = vec![g2.elements[11].clone(), g2.elements[0].clone()];
        match try_algebra_closure(elems).unwrap() {
            Closure::NotClosed { residual, .. } => {
                assert!(!residual.data.iter().all(|x| x.is_zero()))
            }
            Closure::Closed(_) => panic!("expected escape witness"),
        }
    }

    #[test]
    fn jacobi_and_killing_invariance_g2() {
        let (_h, _phi, _so34, g2) = build_models().unwrap();
        g2.verify_jacobi().unwrap();
        g2.verify_killing_invariance().unwrap();
    }

    #[test]
    fn so34_killing_restricts_to_multiple_on_g2() {
        let (_h, _phi, so34, g2) = build_models().unwrap();
        // κ_so34(x, y) = c · κ_g2(x, y) for x, y in g2; compute c exactly.
        let coords: Vec<Vec<Rat>> = g2
            .elements
            .iter()
            .map(|e| so34.coords_of(&e.mat).expect("g2 inside so(3,4)"))
            .collect();
        let mut ratio: Option<Rat> = None;
        for i in 0..14 {
            for j in 0..14 {
                let big = so34.killing_pair(&coords[i], &coords[j]);
                let small = g2.killing.at(i, j).clone();
                if small.is_zero() {
                    assert!(big.is_zero());
                    continue;
                }
                let r = big / small;
                match &ratio {
                    None => ratio = Some(r),
                    Some(prev) => assert_eq!(*prev, r),
                }
            }
        }
        let c = ratio.unwrap();
        assert!(!c.is_zero());
        let _ = rint(0);
    }
}

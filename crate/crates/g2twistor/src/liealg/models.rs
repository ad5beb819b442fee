//! The explicit 7×7 matrix models: the bilinear form H, the invariant 3-form
//! Φ, and the parameter bases of so(3,4) and of its g₂ subalgebra.

use num_traits::Zero;
use std::collections::BTreeMap;

use crate::liealg::basis::{algebra_closure, AlgebraBasis, MatAlgElem};
use crate::liealg::LieError;
use crate::scalar::{rat, rint, Matrix, QMat, Rat};

/// Symmetric bilinear form of signature (3,4) on the 7-dimensional space.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    pub gram: QMat,
}

impl BilinearForm {
    /// The antidiagonal Gram matrix with entries −2; its quadratic form is
    /// −4(x₁x₇ + x₂x₆ + x₃x₅) − x₄², twice the printed quadratic form, which
    /// is the scale on which H(X×Y, Z) recovers the 3-form below exactly.
    pub fn standard() -> Self {
        let mut gram = Matrix::filled(7, 7, Rat::zero());
        for i in 0..7 {
            *gram.at_mut(i, 6 - i) = rint(-2);
        }
        BilinearForm { gram }
    }

    pub fn apply(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..7 {
            for j in 0..7 {
                if !self.gram.at(i, j).is_zero() {
                    acc += self.gram.at(i, j).clone() * &x[i] * &y[j];
                }
            }
        }
        acc
    }
}

/// Alternating 3-form stored on strictly increasing index triples (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    pub comps: BTreeMap<[usize; 3], Rat>,
}

impl ThreeForm {
    pub fn zero() -> Self {
        ThreeForm {
            comps: BTreeMap::new(),
        }
    }

    /// The defining 3-form 2e¹⁴⁷ + e¹⁵⁶ + 8e²³⁷ − 2e²⁴⁶ − 2e³⁴⁵.
    pub fn standard() -> Self {
        let mut comps = BTreeMap::new();
        comps.insert([0, 3, 6], rint(2));
        comps.insert([0, 4, 5], rint(1));
        comps.insert([1, 2, 6], rint(8));
        comps.insert([1, 3, 5], rint(-2));
        comps.insert([2, 3, 4], rint(-2));
        ThreeForm { comps }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn insert_add(&mut self, idx: [usize; 3], v: Rat) {
        if v.is_zero() {
            return;
        }
        let e = self.comps.entry(idx).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            self.comps.remove(&idx);
        }
    }

    /// Component with general indices (sign of the sorting permutation).
    pub fn component(&self, i: usize, j: usize, k: usize) -> Rat {
        if i == j || j == k || i == k {
            return Rat::zero();
        }
        let mut idx = [i, j, k];
        let mut sign = 1i64;
        // Three-element bubble sort tracking parity.
        for a in 0..2 {
            for b in 0..(2 - a) {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        self.comps
            .get(&idx)
            .map(|v| v * Rat::from_integer(sign.into()))
            .unwrap_or_else(Rat::zero)
    }

    /// Evaluate on three coordinate vectors (determinant convention: the
    /// basis wedge e^i∧e^j∧e^k acts as a 3×3 determinant).
    pub fn eval(&self, x: &[Rat], y: &[Rat], z: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for ([i, j, k], c) in &self.comps {
            let det = x[*i].clone() * (y[*j].clone() * &z[*k] - y[*k].clone() * &z[*j])
                - y[*i].clone() * (x[*j].clone() * &z[*k] - x[*k].clone() * &z[*j])
                + z[*i].clone() * (x[*j].clone() * &y[*k] - x[*k].clone() * &y[*j]);
            acc += c * det;
        }
        acc
    }

    /// Coordinates in the 35-dimensional space of increasing triples.
    pub fn to_vector(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); 35];
        for (t, c) in &self.comps {
            v[triple_index(*t)] = c.clone();
        }
        v
    }

    pub fn scale(&self, s: &Rat) -> ThreeForm {
        if s.is_zero() {
            return ThreeForm::zero();
        }
        ThreeForm {
            comps: self.comps.iter().map(|(t, c)| (*t, c * s)).collect(),
        }
    }
}

/// Index of an increasing triple in lexicographic order among C(7,3) = 35.
pub fn triple_index(t: [usize; 3]) -> usize {
    let mut idx = 0usize;
    let mut pos = 0usize;
    for (count, &x) in t.iter().enumerate() {
        for y in pos..x {
            // Remaining choices if y were placed at slot `count`.
            let remaining = 2 - count;
            let avail = 6 - y;
            idx += binom(avail, remaining);
        }
        pos = x + 1;
    }
    idx
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// All increasing triples in lexicographic order.
pub fn all_triples() -> Vec<[usize; 3]> {
    let mut v = Vec::with_capacity(35);
    for i in 0..7 {
        for j in (i + 1)..7 {
            for k in (j + 1)..7 {
                v.push([i, j, k]);
            }
        }
    }
    v
}

/// The infinitesimal action of a matrix on the 3-form:
/// (ρ(A)Φ)(X,Y,Z) = −Φ(AX,Y,Z) − Φ(X,AY,Z) − Φ(X,Y,AZ).
pub fn act_on_threeform(a: &QMat, phi: &ThreeForm) -> ThreeForm {
    assert_eq!((a.rows, a.cols), (7, 7), "act_on_threeform expects 7×7");
    let mut out = ThreeForm::zero();
    for [i, j, k] in all_triples() {
        let mut acc = Rat::zero();
        for m in 0..7 {
            let ami = a.at(m, i);
            if !ami.is_zero() {
                acc -= ami * phi.component(m, j, k);
            }
            let amj = a.at(m, j);
            if !amj.is_zero() {
                acc -= amj * phi.component(i, m, k);
            }
            let amk = a.at(m, k);
            if !amk.is_zero() {
                acc -= amk * phi.component(i, j, m);
            }
        }
        out.insert_add([i, j, k], acc);
    }
    out
}

pub type Placement = &'static [(usize, usize, i64, i64)];

/// so(3,4) parameter placements (row, col, numerator, denominator), 1-based
/// indices as printed.
const SO34_PLACEMENTS: [Placement; 21] = [
    &[(5, 2, -1, 1), (6, 3, 1, 1)],  // a0
    &[(6, 1, 1, 1), (7, 2, -1, 1)],  // a1
    &[(4, 3, 1, 1), (5, 4, -1, 1)],  // a2
    &[(1, 2, -1, 1), (6, 7, 1, 1)],  // a3
    &[(5, 1, -1, 1), (7, 3, 1, 1)],  // a4
    &[(4, 2, 1, 1), (6, 4, -1, 1)],  // a5
    &[(1, 3, -1, 1), (5, 7, 1, 1)],  // a6
    &[(1, 1, 1, 1), (7, 7, -1, 1)],  // a7
    &[(3, 2, 1, 1), (6, 5, -1, 1)],  // a8
    &[(2, 3, 1, 1), (5, 6, -1, 1)],  // a9
    &[(2, 2, 1, 1), (6, 6, -1, 1)],  // a10
    &[(1, 4, 1, 1), (4, 7, -1, 1)],  // a11
    &[(4, 1, 1, 1), (7, 4, -1, 1)],  // a12
    &[(3, 3, 1, 1), (5, 5, -1, 1)],  // a13
    &[(3, 1, -1, 1), (7, 5, 1, 1)],  // a14
    &[(2, 4, 1, 1), (4, 6, -1, 1)],  // a15
    &[(1, 5, -1, 1), (3, 7, 1, 1)],  // a16
    &[(2, 1, -1, 1), (7, 6, 1, 1)],  // a17
    &[(3, 4, 1, 1), (4, 5, -1, 1)],  // a18
    &[(1, 6, 1, 1), (2, 7, -1, 1)],  // a19
    &[(2, 5, -1, 1), (3, 6, 1, 1)],  // a20
];

/// g₂ parameter placements, order b0..b6 then q1..q7.
const G2_PLACEMENTS: [Placement; 14] = [
    &[(4, 1, 1, 3), (5, 2, -2, 3), (6, 3, 2, 3), (7, 4, -1, 3)], // b0
    &[(5, 1, -1, 1), (7, 3, 1, 1)],                              // b1
    &[(6, 1, 1, 6), (7, 2, -1, 6)],                              // b2
    &[(2, 1, -1, 2), (4, 3, 2, 1), (5, 4, -2, 1), (7, 6, 1, 2)], // b3
    &[(3, 1, -1, 12), (4, 2, -1, 3), (6, 4, 1, 3), (7, 5, 1, 12)], // b4
    &[(1, 3, -12, 1), (2, 4, -6, 1), (4, 6, 6, 1), (5, 7, 12, 1)], // b5
    &[(1, 2, -2, 1), (3, 4, 1, 1), (4, 5, -1, 1), (6, 7, 2, 1)], // b6
    &[(1, 1, -1, 1), (3, 3, -1, 1), (5, 5, 1, 1), (7, 7, 1, 1)], // q1
    &[(2, 3, 6, 1), (5, 6, -6, 1)],                              // q2
    &[(3, 2, 1, 3), (6, 5, -1, 3)],                              // q3
    &[(1, 1, -1, 1), (2, 2, -1, 1), (6, 6, 1, 1), (7, 7, 1, 1)], // q4
    &[(1, 4, -2, 1), (2, 5, 1, 2), (3, 6, -1, 2), (4, 7, 2, 1)], // q5
    &[(1, 5, 1, 1), (3, 7, -1, 1)],                              // q6
    &[(1, 6, -6, 1), (2, 7, 6, 1)],                              // q7
];

/// The g₂ placement pattern doubles as the template of the Cartan connection
/// matrix (coframe forms in the b-slots, connection forms in the q-slots).
pub const G2_PLACEMENTS_PUBLIC: [Placement; 14] = G2_PLACEMENTS;

pub const SO34_PARAM_NAMES: [&str; 21] = [
    "a0", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11", "a12", "a13", "a14",
    "a15", "a16", "a17", "a18", "a19", "a20",
];

pub const G2_PARAM_NAMES: [&str; 14] = [
    "b0", "b1", "b2", "b3", "b4", "b5", "b6", "q1", "q2", "q3", "q4", "q5", "q6", "q7",
];

fn element_from_placement(p: Placement, label: &str) -> MatAlgElem {
    let mut m = Matrix::filled(7, 7, Rat::zero());
    for &(r, c, n, d) in p {
        *m.at_mut(r - 1, c - 1) = rat(n, d);
    }
    MatAlgElem {
        mat: m,
        label: Some(label.to_string()),
    }
}

/// Build (H, Φ, so(3,4) basis, g₂ basis) with construction self-checks.
pub fn build_models() -> Result<(BilinearForm, ThreeForm, AlgebraBasis, AlgebraBasis), LieError> {
    let h = BilinearForm::standard();
    let phi = ThreeForm::standard();
    let so_elems: Vec<MatAlgElem> = SO34_PLACEMENTS
        .iter()
        .zip(SO34_PARAM_NAMES)
        .map(|(p, n)| element_from_placement(p, n))
        .collect();
    let g2_elems: Vec<MatAlgElem> = G2_PLACEMENTS
        .iter()
        .zip(G2_PARAM_NAMES)
        .map(|(p, n)| element_from_placement(p, n))
        .collect();

    // Self-check: every so(3,4) element satisfies Eᵀ·H + H·E = 0.
    for e in &so_elems {
        let lhs = e.mat.transpose().mul_mat(&h.gram);
        let rhs = h.gram.mul_mat(&e.mat);
        for i in 0..7 {
            for j in 0..7 {
                if !(lhs.at(i, j).clone() + rhs.at(i, j)).is_zero() {
                    return Err(LieError::InvariantViolation(format!(
                        "{} is not H-skew at ({i},{j})",
                        e.label.as_deref().unwrap_or("?")
                    )));
                }
            }
        }
    }
    // Self-check: every g₂ element annihilates Φ.
    for e in &g2_elems {
        if !act_on_threeform(&e.mat, &phi).is_zero() {
            return Err(LieError::InvariantViolation(format!(
                "{} does not annihilate the 3-form",
                e.label.as_deref().unwrap_or("?")
            )));
        }
    }
    let so34 = algebra_closure(so_elems).map_err(|e| {
        LieError::InvariantViolation(format!("so(3,4) basis failed closure: {e}"))
    })?;
    let g2 = algebra_closure(g2_elems)
        .map_err(|e| LieError::InvariantViolation(format!("g2 basis failed closure: {e}")))?;
    Ok((h, phi, so34, g2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_indexing_is_lex() {
        let ts = all_triples();
        assert_eq!(ts.len(), 35);
        for (i, t) in ts.iter().enumerate() {
            assert_eq!(triple_index(*t), i);
        }
    }

    #[test]
    fn models_build_and_selfcheck() {
        let (h, phi, so34, g2) = build_models().unwrap();
        assert_eq!(so34.dim(), 21);
        assert_eq!(g2.dim(), 14);
        assert_eq!(
            crate::scalar::signature_of_symmetric(&h.gram).unwrap(),
            (3, 4, 0)
        );
        // e2 ⌟ e3 ⌟ Φ = 8 e^7 (0-based: component (1,2,6) = 8).
        assert_eq!(phi.component(1, 2, 6), rint(8));
        assert_eq!(phi.component(2, 1, 6), rint(-8));
    }

    #[test]
    fn identity_acts_with_weight_minus_three() {
        let phi = ThreeForm::standard();
        let mut id = Matrix::filled(7, 7, Rat::zero());
        for i in 0..7 {
            *id.at_mut(i, i) = rint(1);
        }
        let acted = act_on_threeform(&id, &phi);
        assert_eq!(acted, phi.scale(&rint(-3)));
        let zero = Matrix::filled(7, 7, Rat::zero());
        assert!(act_on_threeform(&zero, &phi).is_zero());
    }
}

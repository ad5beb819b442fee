//! Exact linear algebra over any of the toolkit's scalar fields.
//!
//! Everything here is exact Gaussian elimination with full solution
//! structure: unique solutions, affine solution spaces with kernel bases, or
//! inconsistency certificates (a left null vector y with yᵀA = 0, yᵀb ≠ 0).

use crate::scalar::chart::Chart;
use crate::scalar::coef::{Coef, Rat};
use crate::scalar::ratexpr::RatExpr;
use crate::scalar::ScalarError;
use num_traits::{One, Signed, Zero};

/// Field operations shared by ℚ, ℚ(6^{1/3}) and the rational-function field.
pub trait FieldScalar: Clone + PartialEq + Send + Sync + std::fmt::Debug {
    fn f_zero(like: &Self) -> Self;
    fn f_one(like: &Self) -> Self;
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, o: &Self) -> Self;
    fn f_sub(&self, o: &Self) -> Self;
    fn f_mul(&self, o: &Self) -> Self;
    fn f_div(&self, o: &Self) -> Self;
    fn f_neg(&self) -> Self;
    /// Pivot preference: smaller is better (cheaper arithmetic downstream).
    fn f_weight(&self) -> usize {
        1
    }
}

impl FieldScalar for Rat {
    fn f_zero(_: &Self) -> Self {
        Rat::zero()
    }
    fn f_one(_: &Self) -> Self {
        Rat::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
    fn f_neg(&self) -> Self {
        -self
    }
}

impl FieldScalar for Coef {
    fn f_zero(_: &Self) -> Self {
        Coef::zero()
    }
    fn f_one(_: &Self) -> Self {
        Coef::one()
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Self) -> Self {
        self + o
    }
    fn f_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn f_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn f_div(&self, o: &Self) -> Self {
        self / o
    }
    fn f_neg(&self) -> Self {
        -self
    }
}

impl FieldScalar for RatExpr {
    fn f_zero(like: &Self) -> Self {
        RatExpr::zero(&like.chart)
    }
    fn f_one(like: &Self) -> Self {
        RatExpr::one(&like.chart)
    }
    fn f_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn f_add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn f_sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn f_mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn f_div(&self, o: &Self) -> Self {
        self.div_ref(o)
    }
    fn f_neg(&self) -> Self {
        self.neg_ref()
    }
    fn f_weight(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }
}

/// A dense exact matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

pub type QMat = Matrix<Rat>;
pub type RMat = Matrix<RatExpr>;

impl<T: FieldScalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Self {
        let mut rows = Vec::with_capacity(self.cols);
        for c in 0..self.cols {
            let mut row = Vec::with_capacity(self.rows);
            for r in 0..self.rows {
                row.push(self.at(r, c).clone());
            }
            rows.push(row);
        }
        Matrix::from_rows(rows)
    }

    pub fn mul_mat(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let zero = T::f_zero(&self.data[0]);
        let mut out = Matrix::filled(self.rows, other.cols, zero);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::f_zero(&self.data[0]);
                for k in 0..self.cols {
                    acc = acc.f_add(&self.at(i, k).f_mul(other.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::f_zero(&self.data[0]);
                for k in 0..self.cols {
                    acc = acc.f_add(&self.at(i, k).f_mul(&v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Rank by exact elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = self.clone();
        let nc = m.cols;
        reduce_first_block(&mut m, nc).pivots.len()
    }

    /// Kernel basis (right null space).
    pub fn kernel(&self) -> Vec<Vec<T>> {
        if self.rows == 0 || self.cols == 0 || self.data.is_empty() {
            return Vec::new();
        }
        let mut m = self.clone();
        let nc = m.cols;
        let red = reduce_first_block(&mut m, nc);
        kernel_from_reduced(&m, &red)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let zero = T::f_zero(&self.data[0]);
        let one = T::f_one(&self.data[0]);
        let mut aug = Matrix::filled(n, 2 * n, zero);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = one.clone();
        }
        let red = reduce_first_block(&mut aug, n);
        if red.pivots.len() < n {
            return None;
        }
        let mut inv = Matrix::filled(n, n, T::f_zero(&self.data[0]));
        for (row, &col) in red.pivots.iter().enumerate() {
            for j in 0..n {
                *inv.at_mut(col, j) = aug.at(row, n + j).clone();
            }
        }
        Some(inv)
    }
}

struct Reduction {
    /// pivots[row] = column index of that row's pivot (rows in elimination order).
    pivots: Vec<usize>,
}

fn scale_row<T: FieldScalar>(m: &mut Matrix<T>, r: usize, s: &T) {
    for c in 0..m.cols {
        let v = m.at(r, c).f_mul(s);
        *m.at_mut(r, c) = v;
    }
}

/// row_r -= factor * row_p
fn axpy_row<T: FieldScalar>(m: &mut Matrix<T>, r: usize, p: usize, factor: &T) {
    for c in 0..m.cols {
        let delta = m.at(p, c).f_mul(factor);
        let v = m.at(r, c).f_sub(&delta);
        *m.at_mut(r, c) = v;
    }
}

/// Gauss-Jordan on the first `ncols` columns only (used for inversion).
fn reduce_first_block<T: FieldScalar>(m: &mut Matrix<T>, ncols: usize) -> Reduction {
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let start = pivots.len();
        let mut best: Option<(usize, usize)> = None;
        for r in start..m.rows {
            if m.at(r, col).f_is_zero() {
                continue;
            }
            let w = m.at(r, col).f_weight();
            if best.map(|(_, bw)| w < bw).unwrap_or(true) {
                best = Some((r, w));
            }
        }
        let Some((prow, _)) = best else { continue };
        if prow != start {
            for c in 0..m.cols {
                m.data.swap(prow * m.cols + c, start * m.cols + c);
            }
        }
        let pval = m.at(start, col).clone();
        let inv = T::f_one(&pval).f_div(&pval);
        scale_row(m, start, &inv);
        for r in 0..m.rows {
            if r == start || m.at(r, col).f_is_zero() {
                continue;
            }
            let factor = m.at(r, col).clone();
            axpy_row(m, r, start, &factor);
        }
        pivots.push(col);
    }
    Reduction { pivots }
}

fn kernel_from_reduced<T: FieldScalar>(m: &Matrix<T>, red: &Reduction) -> Vec<Vec<T>> {
    let like = &m.data[0];
    let pivot_cols = &red.pivots;
    let free_cols: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![T::f_zero(like); m.cols];
        v[fc] = T::f_one(like);
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = m.at(row, fc).f_neg();
        }
        basis.push(v);
    }
    basis
}

/// Solution structure of an exact linear system.
#[derive(Clone, Debug)]
pub enum LinSolve<T> {
    Unique(Vec<T>),
    Affine {
        particular: Vec<T>,
        kernel: Vec<Vec<T>>,
    },
    Inconsistent {
        /// Left null vector y with yᵀA = 0 and yᵀb ≠ 0.
        certificate: Vec<T>,
    },
}

impl<T> LinSolve<T> {
    pub fn particular(&self) -> Option<&Vec<T>> {
        match self {
            LinSolve::Unique(x) => Some(x),
            LinSolve::Affine { particular, .. } => Some(particular),
            LinSolve::Inconsistent { .. } => None,
        }
    }
}

/// Solve A x = b exactly over the scalar field, with full solution structure.
pub fn exact_linear_solve<T: FieldScalar>(a: &Matrix<T>, b: &[T]) -> Result<LinSolve<T>, ScalarError> {
    if a.rows != b.len() {
        return Err(ScalarError::ShapeMismatch(format!(
            "matrix has {} rows but rhs has {} entries",
            a.rows,
            b.len()
        )));
    }
    let like = if !a.data.is_empty() {
        a.data[0].clone()
    } else if !b.is_empty() {
        b[0].clone()
    } else {
        return Ok(LinSolve::Unique(Vec::new()));
    };
    let zero = T::f_zero(&like);
    let one = T::f_one(&like);
    // Augment [A | b | I] so the identity block accumulates the left
    // multiplier used for certificates.
    let n = a.cols;
    let rows = a.rows;
    let mut aug = Matrix::filled(rows, n + 1 + rows, zero.clone());
    for i in 0..rows {
        for j in 0..n {
            *aug.at_mut(i, j) = a.at(i, j).clone();
        }
        *aug.at_mut(i, n) = b[i].clone();
        *aug.at_mut(i, n + 1 + i) = one.clone();
    }
    let red = reduce_first_block(&mut aug, n);
    let rank = red.pivots.len();
    // Inconsistency: a row with zero A-part but nonzero b-part.
    for r in rank..rows {
        if !aug.at(r, n).f_is_zero() {
            let certificate = (0..rows).map(|i| aug.at(r, n + 1 + i).clone()).collect();
            return Ok(LinSolve::Inconsistent { certificate });
        }
    }
    let mut particular = vec![T::f_zero(&like); n];
    for (row, &pc) in red.pivots.iter().enumerate() {
        particular[pc] = aug.at(row, n).clone();
    }
    if rank == n {
        return Ok(LinSolve::Unique(particular));
    }
    // Kernel from the reduced A block.
    let free_cols: Vec<usize> = (0..n).filter(|c| !red.pivots.contains(c)).collect();
    let mut kernel = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![T::f_zero(&like); n];
        v[fc] = T::f_one(&like);
        for (row, &pc) in red.pivots.iter().enumerate() {
            v[pc] = aug.at(row, fc).f_neg();
        }
        kernel.push(v);
    }
    Ok(LinSolve::Affine { particular, kernel })
}

/// Signature (p, n, z) of a symmetric matrix with exact rational entries,
/// by symmetric pivoting: 1×1 pivots where a nonzero diagonal entry exists,
/// and hyperbolic 2×2 blocks (contributing one plus and one minus) otherwise.
pub fn signature_of_symmetric(s: &QMat) -> Result<(usize, usize, usize), ScalarError> {
    if !s.is_symmetric() {
        return Err(ScalarError::NotSymmetric);
    }
    let n = s.rows;
    let mut m = s.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    while !active.is_empty() {
        // Prefer a 1x1 pivot on the diagonal.
        if let Some(&i) = active.iter().find(|&&i| !m.at(i, i).is_zero()) {
            let d = m.at(i, i).clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            // Clear row/column i from the remaining active block.
            let others: Vec<usize> = active.iter().copied().filter(|&j| j != i).collect();
            for &r in &others {
                let f = m.at(r, i).clone() / d.clone();
                for &c in &others {
                    let delta = f.clone() * m.at(i, c).clone();
                    let v = m.at(r, c).clone() - delta;
                    *m.at_mut(r, c) = v;
                }
            }
            active.retain(|&j| j != i);
            continue;
        }
        // All active diagonal entries are zero: find an off-diagonal pivot.
        let mut pair = None;
        'outer: for (ai, &i) in active.iter().enumerate() {
            for &j in active.iter().skip(ai + 1) {
                if !m.at(i, j).is_zero() {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = pair else {
            zero += active.len();
            break;
        };
        // The block [[0, b], [b, 0]] is congruent to diag(b, −b).
        pos += 1;
        neg += 1;
        let b = m.at(i, j).clone();
        let others: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&r| r != i && r != j)
            .collect();
        // Eliminate via the 2×2 block inverse [[0,1/b],[1/b,0]].
        for &r in &others {
            let ri = m.at(r, i).clone();
            let rj = m.at(r, j).clone();
            for &c in &others {
                let ci = m.at(i, c).clone();
                let cj = m.at(j, c).clone();
                let delta = (ri.clone() * cj + rj.clone() * ci) / b.clone();
                let v = m.at(r, c).clone() - delta;
                *m.at_mut(r, c) = v;
            }
        }
        active.retain(|&r| r != i && r != j);
    }
    Ok((pos, neg, zero))
}

/// Matrix over rational functions from string-free construction helpers.
impl RMat {
    pub fn zero_expr(chart: &Chart, rows: usize, cols: usize) -> RMat {
        Matrix::filled(rows, cols, RatExpr::zero(chart))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::coef::rint;

    fn qm(rows: Vec<Vec<i64>>) -> QMat {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rint).collect())
                .collect(),
        )
    }

    #[test]
    fn unique_solution() {
        let a = qm(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let b = vec![rint(1), rint(2), rint(3)];
        match exact_linear_solve(&a, &b).unwrap() {
            LinSolve::Unique(x) => assert_eq!(x, b),
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn affine_zero_map() {
        let a = qm(vec![vec![0, 0], vec![0, 0]]);
        let b = vec![rint(0), rint(0)];
        match exact_linear_solve(&a, &b).unwrap() {
            LinSolve::Affine { kernel, .. } => assert_eq!(kernel.len(), 2),
            other => panic!("expected affine, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_certificate() {
        // x + y = 1, x + y = 2 has certificate (1, -1).
        let a = qm(vec![vec![1, 1], vec![1, 1]]);
        let b = vec![rint(1), rint(2)];
        match exact_linear_solve(&a, &b).unwrap() {
            LinSolve::Inconsistent { certificate } => {
                // yᵀ A = 0 and yᵀ b ≠ 0
                let at = a.transpose();
                let ya = at.mul_vec(&certificate);
                assert!(ya.iter().all(|v| v.is_zero()));
                let yb: Rat = certificate[0].clone() * b[0].clone()
                    + certificate[1].clone() * b[1].clone();
                assert!(!yb.is_zero());
            }
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn signature_diag() {
        let mut d = Matrix::filled(7, 7, Rat::zero());
        for (i, v) in [1, 1, 1, -1, -1, -1, -1].iter().enumerate() {
            *d.at_mut(i, i) = rint(*v);
        }
        assert_eq!(signature_of_symmetric(&d).unwrap(), (3, 4, 0));
    }

    #[test]
    fn signature_hyperbolic_block() {
        // Antidiagonal -2's with a -1 center: signature (3,4).
        let mut m = Matrix::filled(7, 7, Rat::zero());
        for i in 0..7 {
            *m.at_mut(i, 6 - i) = rint(-2);
        }
        *m.at_mut(3, 3) = rint(-1);
        assert_eq!(signature_of_symmetric(&m).unwrap(), (3, 4, 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = qm(vec![vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        let id = a.mul_mat(&inv);
        assert_eq!(id, qm(vec![vec![1, 0], vec![0, 1]]));
    }
}

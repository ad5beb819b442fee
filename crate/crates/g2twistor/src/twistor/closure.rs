//! Bracket-closure reports for vector-field symmetry algebras: exact
//! structure constants over ℚ by monomial matching, Killing signature, and
//! center dimension.

use num_traits::Zero;

use crate::geomcalc::{lie_bracket, VectorField};
use crate::liealg::basis::killing_from_sc;
use crate::scalar::{
    exact_linear_solve, signature_of_symmetric, LinSolve, Matrix, Poly, QMat, Rat, RatExpr,
};
use crate::twistor::TwistorError;

/// A closed Lie algebra of vector fields with rational structure constants.
pub struct VfAlgebra {
    pub names: Vec<String>,
    pub generators: Vec<VectorField>,
    pub sc: Vec<Vec<Vec<Rat>>>,
    pub killing: QMat,
}

impl VfAlgebra {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn killing_signature(&self) -> (usize, usize, usize) {
        signature_of_symmetric(&self.killing).expect("killing symmetric")
    }

    pub fn center_dim(&self) -> usize {
        let n = self.dim();
        let mut m = Matrix::filled(n * n, n, Rat::zero());
        for j in 0..n {
            for l in 0..n {
                for k in 0..n {
                    *m.at_mut(l * n + k, j) = self.sc[j][l][k].clone();
                }
            }
        }
        m.kernel().len()
    }

    /// Exact Jacobi identity on the structure constants.
    pub fn verify_jacobi(&self) -> Result<(), TwistorError> {
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
                            return Err(TwistorError::NotClosed(format!(
                                "Jacobi fails on ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The ℚ-linear span data of a list of rational-function expressions: each
/// expression is cleared to a polynomial against the common denominator and
/// its monomial coefficients become matrix rows.
struct SpanMatrix {
    /// One column per generator; rows indexed by (component, monomial).
    matrix: QMat,
    /// For solving: map a new expression list to a rhs vector, failing when a
    /// monomial outside the span's support appears.
    support: Vec<(usize, Poly, Vec<crate::scalar::Monomial>)>,
    denominators: Vec<RatExpr>,
}

fn clear_denominator(e: &RatExpr, den: &RatExpr) -> Result<Poly, TwistorError> {
    // e · den must be polynomial.
    let prod = e.mul_ref(den);
    if !prod.den.is_constant() {
        return Err(TwistorError::NotClosed(format!(
            "expression {e} not polynomial against the common denominator"
        )));
    }
    let scale = prod.den.constant_value().unwrap().inv();
    Ok(prod.num.mul_coef(&scale))
}

fn build_span(gens: &[VectorField]) -> Result<SpanMatrix, TwistorError> {
    let chart = &gens[0].chart;
    let n = chart.dim();
    // Common denominator per component.
    let mut denominators = Vec::with_capacity(n);
    for i in 0..n {
        let mut den = RatExpr::one(chart);
        for g in gens {
            let d = RatExpr {
                chart: chart.clone(),
                num: g.comps[i].den.clone(),
                den: Poly::one(chart.dim()),
            };
            // lcm via gcd of polynomials.
            den = RatExpr {
                chart: chart.clone(),
                num: den.num.lcm(&d.num),
                den: Poly::one(chart.dim()),
            };
        }
        denominators.push(den);
    }
    // Monomial support per component.
    let mut support = Vec::new();
    let mut rows_total = 0usize;
    let mut cleared: Vec<Vec<Poly>> = vec![Vec::new(); gens.len()];
    for i in 0..n {
        let mut monos = std::collections::BTreeSet::new();
        for (j, g) in gens.iter().enumerate() {
            let p = clear_denominator(&g.comps[i], &denominators[i])?;
            for m in p.terms.keys() {
                monos.insert(m.clone());
            }
            cleared[j].push(p);
        }
        let monos: Vec<crate::scalar::Monomial> = monos.into_iter().collect();
        rows_total += monos.len();
        support.push((i, Poly::zero(chart.dim()), monos));
    }
    let mut matrix = Matrix::filled(rows_total, gens.len(), Rat::zero());
    let mut row0 = 0usize;
    for (i, _, monos) in &support {
        for (j, cleared_j) in cleared.iter().enumerate() {
            let p = &cleared_j[*i];
            for (r, m) in monos.iter().enumerate() {
                if let Some(c) = p.terms.get(m) {
                    let rat = c
                        .as_rat()
                        .ok_or_else(|| {
                            TwistorError::NotClosed(
                                "irrational coefficient in span solve".to_string(),
                            )
                        })?
                        .clone();
                    *matrix.at_mut(row0 + r, j) = rat;
                }
            }
        }
        row0 += monos.len();
    }
    Ok(SpanMatrix {
        matrix,
        support,
        denominators,
    })
}

impl SpanMatrix {
    /// Express a field in the span with rational constants; `None` when it
    /// escapes (including through monomials outside the support).
    fn solve(&self, target: &VectorField) -> Result<Option<Vec<Rat>>, TwistorError> {
        let mut rhs = vec![Rat::zero(); self.matrix.rows];
        let mut row0 = 0usize;
        for (i, _, monos) in &self.support {
            let p = clear_denominator(&target.comps[*i], &self.denominators[*i])?;
            let mut remaining = p.terms.clone();
            for (r, m) in monos.iter().enumerate() {
                if let Some(c) = remaining.remove(m) {
                    rhs[row0 + r] = c
                        .as_rat()
                        .ok_or_else(|| {
                            TwistorError::NotClosed(
                                "irrational coefficient in span solve".to_string(),
                            )
                        })?
                        .clone();
                }
            }
            if !remaining.is_empty() {
                return Ok(None);
            }
            row0 += monos.len();
        }
        match exact_linear_solve(&self.matrix, &rhs).map_err(TwistorError::Scalar)? {
            LinSolve::Unique(c) => Ok(Some(c)),
            LinSolve::Affine { particular, .. } => Ok(Some(particular)),
            LinSolve::Inconsistent { .. } => Ok(None),
        }
    }
}

/// Close a list of named vector fields under brackets with constant rational
/// coefficients; reports the offending pair when a bracket escapes the span.
pub fn vf_closure(
    names: &[String],
    gens: &[VectorField],
) -> Result<VfAlgebra, TwistorError> {
    assert!(!gens.is_empty());
    assert_eq!(names.len(), gens.len());
    let span = build_span(gens)?;
    // Linear independence over ℚ.
    if span.matrix.rank() != gens.len() {
        return Err(TwistorError::DependentInput);
    }
    let n = gens.len();
    let mut sc = vec![vec![vec![Rat::zero(); n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let br = lie_bracket(&gens[i], &gens[j])?;
            match span.solve(&br)? {
                Some(coords) => {
                    for (k, c) in coords.into_iter().enumerate() {
                        sc[j][i][k] = -c.clone();
                        sc[i][j][k] = c;
                    }
                }
                None => {
                    return Err(TwistorError::NotClosed(format!(
                        "[{}, {}] escapes the span",
                        names[i], names[j]
                    )))
                }
            }
        }
    }
    let killing = killing_from_sc(&sc);
    Ok(VfAlgebra {
        names: names.to_vec(),
        generators: gens.to_vec(),
        sc,
        killing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::charts;

    #[test]
    fn heisenberg_like_closure() {
        let c = charts::m5();
        // [∂x, ∂p + x∂y] = ∂y: three fields close with one nonzero bracket.
        let dx = VectorField::partial(&c, "x").unwrap();
        let dy = VectorField::partial(&c, "y").unwrap();
        let mixed = VectorField::partial(&c, "p")
            .unwrap()
            .add(&dy.scale(&RatExpr::var(&c, "x").unwrap()));
        let names: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
        let alg = vf_closure(&names, &[dx, mixed, dy]).unwrap();
        assert_eq!(alg.dim(), 3);
        alg.verify_jacobi().unwrap();
        assert_eq!(alg.sc[0][1][2], Rat::from_integer(1.into()));
        assert_eq!(alg.center_dim(), 1);
    }

    #[test]
    fn escape_reported() {
        let c = charts::m5();
        let x = RatExpr::var(&c, "x").unwrap();
        // [∂x, x²∂x] = 2x∂x escapes span(∂x, x²∂x) over ℚ.
        let dx = VectorField::partial(&c, "x").unwrap();
        let x2dx = dx.scale(&x.pow_int(2));
        let names: Vec<String> = ["A", "B"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(
            vf_closure(&names, &[dx, x2dx]),
            Err(TwistorError::NotClosed(_))
        ));
    }
}

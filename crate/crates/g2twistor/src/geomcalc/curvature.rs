//! Pseudo-Riemannian curvature of an exact metric, up to the Weyl tensor.
//!
//! The conformal-flatness criterion in dimension ≥ 4 is the vanishing of the
//! Weyl tensor, computed here through the Schouten tensor and the
//! Kulkarni–Nomizu product.

use crate::geomcalc::sym::SymTensor;
use crate::geomcalc::GeomError;
use crate::scalar::{Chart, Matrix, RMat, RatExpr};

/// Dense 4-index covariant tensor.
#[derive(Clone, Debug)]
pub struct FourTensor {
    pub chart: Chart,
    pub n: usize,
    pub comps: Vec<RatExpr>,
}

impl FourTensor {
    fn zero(chart: &Chart) -> Self {
        let n = chart.dim();
        FourTensor {
            chart: chart.clone(),
            n,
            comps: vec![RatExpr::zero(chart); n * n * n * n],
        }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn at(&self, a: usize, b: usize, c: usize, d: usize) -> &RatExpr {
        &self.comps[self.idx(a, b, c, d)]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: RatExpr) {
        let i = self.idx(a, b, c, d);
        self.comps[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
}

/// All curvature data of a nondegenerate exact metric.
pub struct CurvatureData {
    pub metric: RMat,
    pub inverse: RMat,
    /// Γ^k_{ij}, indexed [k][i][j].
    pub christoffel: Vec<Vec<Vec<RatExpr>>>,
    /// Fully covariant Riemann tensor R_{abcd} = g_{ae} R^e_{bcd}.
    pub riemann: FourTensor,
    pub ricci: RMat,
    pub scalar: RatExpr,
    pub schouten: RMat,
    pub weyl: FourTensor,
}

/// Metric matrix from a degree-2 symmetric tensor (monomial coefficients are
/// read with the (a⊗b+b⊗a)/2 convention: off-diagonal entries are halved).
pub fn metric_matrix(g: &SymTensor) -> RMat {
    let chart = &g.chart;
    let n = chart.dim();
    let mut m = Matrix::filled(n, n, RatExpr::zero(chart));
    for (mono, c) in &g.terms {
        let idx: Vec<usize> = (0..n)
            .flat_map(|i| std::iter::repeat(i).take(mono[i] as usize))
            .collect();
        assert_eq!(idx.len(), 2, "metric must be a degree-2 tensor");
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            *m.at_mut(i, i) = m.at(i, i).add_ref(c);
        } else {
            let half = c.mul_rat(&crate::scalar::rat(1, 2));
            *m.at_mut(i, j) = m.at(i, j).add_ref(&half);
            *m.at_mut(j, i) = m.at(j, i).add_ref(&half);
        }
    }
    m
}

/// Compute Christoffel symbols, Riemann, Ricci, scalar curvature, Schouten,
/// and the Weyl tensor, all exactly.
pub fn weyl_tensor(g: &SymTensor) -> Result<CurvatureData, GeomError> {
    let chart = g.chart.clone();
    let n = chart.dim();
    let metric = metric_matrix(g);
    let inverse = metric
        .inverse()
        .ok_or(GeomError::DegenerateMetric)?;
    let zero = RatExpr::zero(&chart);

    // ∂_k g_{ij}
    let mut dg = vec![vec![vec![zero.clone(); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg[k][i][j] = metric.at(i, j).differentiate_index(k);
            }
        }
    }
    // Γ^k_{ij} = ½ g^{kl} (∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
    let mut christoffel = vec![vec![vec![zero.clone(); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = zero.clone();
                for l in 0..n {
                    let gkl = inverse.at(k, l);
                    if gkl.is_zero() {
                        continue;
                    }
                    let t = dg[i][j][l]
                        .add_ref(&dg[j][i][l])
                        .sub_ref(&dg[l][i][j]);
                    acc = acc.add_ref(&gkl.mul_ref(&t));
                }
                let v = acc.mul_rat(&crate::scalar::rat(1, 2));
                christoffel[k][i][j] = v.clone();
                christoffel[k][j][i] = v;
            }
        }
    }
    // R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}
    let mut riem_up = vec![zero.clone(); n * n * n * n];
    let at4 = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut acc = christoffel[l][j][k]
                        .differentiate_index(i)
                        .sub_ref(&christoffel[l][i][k].differentiate_index(j));
                    for m in 0..n {
                        acc = acc
                            .add_ref(&christoffel[l][i][m].mul_ref(&christoffel[m][j][k]))
                            .sub_ref(&christoffel[l][j][m].mul_ref(&christoffel[m][i][k]));
                    }
                    riem_up[at4(l, k, i, j)] = acc.clone();
                    riem_up[at4(l, k, j, i)] = acc.neg_ref();
                }
            }
        }
    }
    // Lower the first index.
    let mut riemann = FourTensor::zero(&chart);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = zero.clone();
                    for e in 0..n {
                        let gae = metric.at(a, e);
                        if gae.is_zero() {
                            continue;
                        }
                        acc = acc.add_ref(&gae.mul_ref(&riem_up[at4(e, b, c, d)]));
                    }
                    riemann.set(a, b, c, d, acc);
                }
            }
        }
    }
    // Ricci R_{kj} = R^i_{kij}.
    let mut ricci = Matrix::filled(n, n, zero.clone());
    for k in 0..n {
        for j in 0..n {
            let mut acc = zero.clone();
            for i in 0..n {
                acc = acc.add_ref(&riem_up[at4(i, k, i, j)]);
            }
            *ricci.at_mut(k, j) = acc;
        }
    }
    // Scalar = g^{kj} R_{kj}.
    let mut scalar = zero.clone();
    for k in 0..n {
        for j in 0..n {
            let gkj = inverse.at(k, j);
            if !gkj.is_zero() {
                scalar = scalar.add_ref(&gkj.mul_ref(ricci.at(k, j)));
            }
        }
    }
    // Schouten P = (Ric − Scal/(2(n−1)) g) / (n−2).
    let n_i = n as i64;
    let mut schouten = Matrix::filled(n, n, zero.clone());
    let scal_factor = scalar.mul_rat(&crate::scalar::rat(1, 2 * (n_i - 1)));
    for i in 0..n {
        for j in 0..n {
            let v = ricci
                .at(i, j)
                .sub_ref(&scal_factor.mul_ref(metric.at(i, j)))
                .mul_rat(&crate::scalar::rat(1, n_i - 2));
            *schouten.at_mut(i, j) = v;
        }
    }
    // Weyl = Riem − g ⟨∧⟩ P.
    let mut weyl = FourTensor::zero(&chart);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let kn = metric
                        .at(a, c)
                        .mul_ref(schouten.at(b, d))
                        .add_ref(&metric.at(b, d).mul_ref(schouten.at(a, c)))
                        .sub_ref(&metric.at(a, d).mul_ref(schouten.at(b, c)))
                        .sub_ref(&metric.at(b, c).mul_ref(schouten.at(a, d)));
                    let v = riemann.at(a, b, c, d).sub_ref(&kn);
                    weyl.set(a, b, c, d, v);
                }
            }
        }
    }
    Ok(CurvatureData {
        metric,
        inverse,
        christoffel,
        riemann,
        ricci,
        scalar,
        schouten,
        weyl,
    })
}

impl CurvatureData {
    /// Standard symmetries of the Weyl tensor plus total trace-freeness.
    pub fn verify_weyl_symmetries(&self) -> Result<(), GeomError> {
        let n = self.weyl.n;
        let w = &self.weyl;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        // Antisymmetry and pair symmetry.
                        if !w.at(a, b, c, d).add_ref(w.at(a, b, d, c)).is_zero()
                            || !w.at(a, b, c, d).add_ref(w.at(b, a, c, d)).is_zero()
                            || !w.at(a, b, c, d).sub_ref(w.at(c, d, a, b)).is_zero()
                        {
                            return Err(GeomError::InvariantViolation(format!(
                                "Weyl symmetry fails at ({a},{b},{c},{d})"
                            )));
                        }
                    }
                    // First Bianchi.
                    for d in 0..n {
                        let s = w
                            .at(a, b, c, d)
                            .add_ref(w.at(a, c, d, b))
                            .add_ref(w.at(a, d, b, c));
                        if !s.is_zero() {
                            return Err(GeomError::InvariantViolation(format!(
                                "Bianchi fails at ({a},{b},{c},{d})"
                            )));
                        }
                    }
                }
            }
        }
        // Trace-free: g^{ac} W_{abcd} = 0.
        for b in 0..n {
            for d in 0..n {
                let mut acc = RatExpr::zero(&w.chart);
                for a in 0..n {
                    for c in 0..n {
                        let g = self.inverse.at(a, c);
                        if !g.is_zero() {
                            acc = acc.add_ref(&g.mul_ref(w.at(a, b, c, d)));
                        }
                    }
                }
                if !acc.is_zero() {
                    return Err(GeomError::InvariantViolation(format!(
                        "Weyl trace at ({b},{d}) is nonzero"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::charts;

    #[test]
    fn flat_metric_has_zero_weyl() {
        let c = charts::a5();
        // dx0² + dx1² − dx2² + dx3² + dx4² (constant coefficients).
        let mut g = SymTensor::zero(&c);
        for (i, s) in [1i64, 1, -1, 1, 1].iter().enumerate() {
            let mut mono = vec![0u8; 5];
            mono[i] = 2;
            g.insert_add(mono, RatExpr::from_int(&c, *s));
        }
        let data = weyl_tensor(&g).unwrap();
        assert!(data.weyl.is_zero());
        assert!(data.scalar.is_zero());
        data.verify_weyl_symmetries().unwrap();
    }

    #[test]
    fn degenerate_metric_detected() {
        let c = charts::a5();
        let mut g = SymTensor::zero(&c);
        let mut mono = vec![0u8; 5];
        mono[0] = 2;
        g.insert_add(mono, RatExpr::one(&c));
        assert!(matches!(weyl_tensor(&g), Err(GeomError::DegenerateMetric)));
    }
}

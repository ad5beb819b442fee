//! Chart vector fields, Lie brackets, and growth vectors of distributions.

use crate::geomcalc::GeomError;
use crate::scalar::{Chart, Matrix, RatExpr};

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub chart: Chart,
    pub comps: Vec<RatExpr>,
}

impl VectorField {
    pub fn zero(chart: &Chart) -> Self {
        VectorField {
            chart: chart.clone(),
            comps: (0..chart.dim()).map(|_| RatExpr::zero(chart)).collect(),
        }
    }

    /// The coordinate field ∂/∂var.
    pub fn partial(chart: &Chart, var: &str) -> Result<Self, GeomError> {
        let i = chart
            .index_of(var)
            .ok_or_else(|| GeomError::UnknownVariable(var.to_string()))?;
        let mut v = Self::zero(chart);
        v.comps[i] = RatExpr::one(chart);
        Ok(v)
    }

    pub fn from_comps(chart: &Chart, comps: Vec<RatExpr>) -> Self {
        assert_eq!(comps.len(), chart.dim());
        VectorField {
            chart: chart.clone(),
            comps,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_chart(other).expect("chart mismatch");
        VectorField {
            chart: self.chart.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &RatExpr) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c.mul_ref(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().map(|c| c.neg_ref()).collect(),
        }
    }

    fn check_chart(&self, other: &Self) -> Result<(), GeomError> {
        if self.chart != other.chart {
            return Err(GeomError::ChartMismatch);
        }
        Ok(())
    }

    /// Directional derivative X(f).
    pub fn apply(&self, f: &RatExpr) -> RatExpr {
        assert!(f.chart == self.chart, "chart mismatch in X(f)");
        let mut acc = RatExpr::zero(&self.chart);
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add_ref(&c.mul_ref(&f.differentiate_index(i)));
        }
        acc
    }

    /// Extend to a larger chart (same variable names, extra fiber variables).
    pub fn extend_to(&self, chart: &Chart) -> Result<VectorField, GeomError> {
        let mut out = VectorField::zero(chart);
        let assignment: Vec<RatExpr> = self
            .chart
            .vars()
            .iter()
            .map(|v| RatExpr::var(chart, v))
            .collect::<Result<_, _>>()
            .map_err(|_| GeomError::ChartMismatch)?;
        for (i, c) in self.comps.iter().enumerate() {
            let name = self.chart.var_name(i);
            let j = chart.index_of(name).ok_or(GeomError::ChartMismatch)?;
            out.comps[j] = c
                .substitute(chart, &assignment)
                .map_err(GeomError::Scalar)?;
        }
        Ok(out)
    }
}

/// Lie bracket [X, Y]^i = X(Y^i) − Y(X^i).
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, GeomError> {
    if x.chart != y.chart {
        return Err(GeomError::ChartMismatch);
    }
    let comps = (0..x.chart.dim())
        .map(|i| x.apply(&y.comps[i]).sub_ref(&y.apply(&x.comps[i])))
        .collect();
    Ok(VectorField {
        chart: x.chart.clone(),
        comps,
    })
}

/// Generic rank (over the rational-function field) of a list of fields.
pub fn generic_rank(fields: &[VectorField]) -> usize {
    if fields.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<RatExpr>> = fields.iter().map(|f| f.comps.clone()).collect();
    Matrix::from_rows(rows).rank()
}

/// Reduce a spanning list to independent generators by row reduction.
fn reduce_span(fields: Vec<VectorField>) -> Vec<VectorField> {
    if fields.is_empty() {
        return fields;
    }
    let chart = fields[0].chart.clone();
    let mut m = Matrix::from_rows(fields.iter().map(|f| f.comps.clone()).collect());
    // Plain elimination; keep the nonzero rows.
    let mut out = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let rows = m.rows;
    let cols = m.cols;
    let mut next_row = 0usize;
    for col in 0..cols {
        let mut found = None;
        for r in next_row..rows {
            if !m.at(r, col).is_zero() {
                found = Some(r);
                break;
            }
        }
        let Some(prow) = found else { continue };
        for c in 0..cols {
            m.data.swap(prow * cols + c, next_row * cols + c);
        }
        let pval = m.at(next_row, col).clone();
        for r in (next_row + 1)..rows {
            if m.at(r, col).is_zero() {
                continue;
            }
            let f = m.at(r, col).div_ref(&pval);
            for c in 0..cols {
                let delta = m.at(next_row, c).mul_ref(&f);
                let v = m.at(r, c).sub_ref(&delta);
                *m.at_mut(r, c) = v;
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    for r in 0..next_row {
        let comps: Vec<RatExpr> = (0..cols).map(|c| m.at(r, c).clone()).collect();
        out.push(VectorField::from_comps(&chart, comps));
    }
    out
}

/// Growth vector of the weak derived flag: ranks of D, D + [D,D], … up to
/// `depth` steps, computed at generic points of the chart.
pub fn span_growth(generators: &[VectorField], depth: usize) -> Result<Vec<usize>, GeomError> {
    assert!(!generators.is_empty());
    let chart = &generators[0].chart;
    for g in generators {
        if g.chart != *chart {
            return Err(GeomError::ChartMismatch);
        }
    }
    let mut ranks = Vec::new();
    let mut current = reduce_span(generators.to_vec());
    ranks.push(current.len());
    for _ in 1..depth {
        let mut next = current.clone();
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                next.push(lie_bracket(&current[i], &current[j])?);
            }
        }
        let reduced = reduce_span(next);
        let r = reduced.len();
        ranks.push(r);
        let stable = r == *ranks.get(ranks.len().wrapping_sub(2)).unwrap_or(&0);
        current = reduced;
        if stable || r == chart.dim() {
            // Pad the remaining requested depths with the stabilized rank.
            while ranks.len() < depth {
                ranks.push(r);
            }
            break;
        }
    }
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::charts;

    #[test]
    fn bracket_examples() {
        let c = charts::m5();
        // [∂x, ∂p + x∂y] = ∂y
        let dx = VectorField::partial(&c, "x").unwrap();
        let x = RatExpr::var(&c, "x").unwrap();
        let v = VectorField::partial(&c, "p")
            .unwrap()
            .add(&VectorField::partial(&c, "y").unwrap().scale(&x));
        let b = lie_bracket(&dx, &v).unwrap();
        assert_eq!(b, VectorField::partial(&c, "y").unwrap());
        // [X, X] = 0
        assert!(lie_bracket(&v, &v).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_distribution_generators() {
        let c = charts::m5();
        // ξ1 = ∂x + p∂y + q∂p + h∂z with h = q³/6, ξ2 = ∂q:
        // [ξ1, ξ2] = −∂p − (q²/2)∂z.
        let p = RatExpr::var(&c, "p").unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        let h = q.pow_int(3).mul_rat(&crate::scalar::rat(1, 6));
        let xi1 = VectorField::partial(&c, "x")
            .unwrap()
            .add(&VectorField::partial(&c, "y").unwrap().scale(&p))
            .add(&VectorField::partial(&c, "p").unwrap().scale(&q))
            .add(&VectorField::partial(&c, "z").unwrap().scale(&h));
        let xi2 = VectorField::partial(&c, "q").unwrap();
        let b = lie_bracket(&xi1, &xi2).unwrap();
        let expect = VectorField::partial(&c, "p")
            .unwrap()
            .neg()
            .add(
                &VectorField::partial(&c, "z")
                    .unwrap()
                    .scale(&q.pow_int(2).mul_rat(&crate::scalar::rat(-1, 2))),
            );
        assert_eq!(b, expect);
    }

    #[test]
    fn integrable_span_growth() {
        let c = charts::m5();
        let dx = VectorField::partial(&c, "x").unwrap();
        let dy = VectorField::partial(&c, "y").unwrap();
        let g = span_growth(&[dx, dy], 4).unwrap();
        assert_eq!(g, vec![2, 2, 2, 2]);
    }
}

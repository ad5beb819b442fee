//! Chart maps and pullbacks.

use crate::geomcalc::form::DiffForm;
use crate::geomcalc::sym::SymTensor;
use crate::geomcalc::GeomError;
use crate::scalar::{Chart, RatExpr};

/// A map between charts: each target coordinate is assigned an expression on
/// the source chart.
#[derive(Clone, Debug)]
pub struct ChartMap {
    pub source: Chart,
    pub target: Chart,
    pub assignment: Vec<RatExpr>,
}

impl ChartMap {
    pub fn new(source: &Chart, target: &Chart, assignment: Vec<RatExpr>) -> Self {
        assert_eq!(assignment.len(), target.dim());
        for a in &assignment {
            assert!(a.chart == *source, "assignment must live on the source chart");
        }
        ChartMap {
            source: source.clone(),
            target: target.clone(),
            assignment,
        }
    }

    /// The identity map of a chart.
    pub fn identity(chart: &Chart) -> Self {
        let assignment = (0..chart.dim())
            .map(|i| RatExpr::var_index(chart, i))
            .collect();
        ChartMap {
            source: chart.clone(),
            target: chart.clone(),
            assignment,
        }
    }

    /// Composition: self ∘ inner (inner maps into self's source).
    pub fn compose(&self, inner: &ChartMap) -> Result<ChartMap, GeomError> {
        if inner.target != self.source {
            return Err(GeomError::ChartMismatch);
        }
        let assignment = self
            .assignment
            .iter()
            .map(|a| a.substitute(&inner.source, &inner.assignment))
            .collect::<Result<Vec<_>, _>>()
            .map_err(GeomError::Scalar)?;
        Ok(ChartMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            assignment,
        })
    }

    pub fn pullback_scalar(&self, f: &RatExpr) -> Result<RatExpr, GeomError> {
        assert!(f.chart == self.target);
        f.substitute(&self.source, &self.assignment)
            .map_err(GeomError::Scalar)
    }

    /// d(φ_j) expanded on the source chart.
    fn d_target_var(&self, j: usize) -> DiffForm {
        let mut out = DiffForm::zero(&self.source, 1);
        for i in 0..self.source.dim() {
            let dc = self.assignment[j].differentiate_index(i);
            if !dc.is_zero() {
                out.insert_add(1 << i, dc);
            }
        }
        out
    }

    fn d_target_var_sym(&self, j: usize) -> SymTensor {
        SymTensor::from_one_form(&self.d_target_var(j))
    }

    /// Pullback of a differential form.
    pub fn pullback_form(&self, omega: &DiffForm) -> Result<DiffForm, GeomError> {
        assert!(omega.chart == self.target);
        let mut out = DiffForm::zero(&self.source, omega.degree);
        let differentials: Vec<DiffForm> =
            (0..self.target.dim()).map(|j| self.d_target_var(j)).collect();
        for (mask, c) in &omega.terms {
            let coeff = self.pullback_scalar(c)?;
            let mut acc = DiffForm::scalar(&self.source, coeff);
            let mut mm = *mask;
            while mm != 0 {
                let j = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                acc = acc.wedge(&differentials[j])?;
            }
            if acc.degree == omega.degree {
                for (m, c) in acc.terms {
                    out.insert_add(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Pullback of a symmetric tensor.
    pub fn pullback_sym(&self, t: &SymTensor) -> Result<SymTensor, GeomError> {
        assert!(t.chart == self.target);
        let differentials: Vec<SymTensor> = (0..self.target.dim())
            .map(|j| self.d_target_var_sym(j))
            .collect();
        let mut out = SymTensor::zero(&self.source);
        for (mono, c) in &t.terms {
            let coeff = self.pullback_scalar(c)?;
            let mut acc = SymTensor::scalar(&self.source, coeff);
            for (j, &e) in mono.iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&differentials[j].pow(e as u32))?;
                }
            }
            for (m, c) in acc.terms {
                out.insert_add(m, c);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{charts, parse_scalar, Bindings};

    #[test]
    fn identity_pullback_is_identity() {
        let c = charts::m5();
        let f = parse_scalar("x*q^2 - z/(1+p^2)", &c, &Bindings::new()).unwrap();
        let id = ChartMap::identity(&c);
        assert!(id.pullback_scalar(&f).unwrap().equals(&f));
        let form = DiffForm::scalar(&c, f).d();
        assert_eq!(id.pullback_form(&form).unwrap(), form);
    }

    #[test]
    fn pullback_commutes_with_d() {
        let m7 = charts::m7();
        let m5 = charts::m5();
        // Projection (x,y,p,q,z,v,w) → (x,y,p,q,z).
        let assignment = ["x", "y", "p", "q", "z"]
            .iter()
            .map(|v| RatExpr::var(&m7, v).unwrap())
            .collect();
        let proj = ChartMap::new(&m7, &m5, assignment);
        let f = parse_scalar("q^3 - x*y*p + z^2", &m5, &Bindings::new()).unwrap();
        let omega = DiffForm::scalar(&m5, f).d();
        let a = proj.pullback_form(&omega.d());
        let b = proj.pullback_form(&omega).unwrap().d();
        assert_eq!(a.unwrap(), b);
    }
}

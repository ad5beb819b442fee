//! Exterior differential forms on a chart.
//!
//! A p-form is stored as a map from variable bitmasks (bit i ⇔ dxᵢ present,
//! popcount = degree) to scalar coefficients. Basis wedges act by the
//! determinant convention, matching the 3-form conventions of the algebra
//! layer.

use std::collections::BTreeMap;

use crate::geomcalc::vector::VectorField;
use crate::geomcalc::GeomError;
use crate::scalar::{Chart, RatExpr};

pub type Mask = u16;

#[derive(Clone, Debug, PartialEq)]
pub struct DiffForm {
    pub chart: Chart,
    pub degree: usize,
    pub terms: BTreeMap<Mask, RatExpr>,
}

fn popcount(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Sign of merging two disjoint sorted index sets (inversions across).
fn merge_sign(a: Mask, b: Mask) -> i32 {
    let mut sign = 1i32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros() as u16;
        // Count elements of `a` greater than j.
        let higher = a >> (j + 1);
        if popcount(higher) % 2 == 1 {
            sign = -sign;
        }
        bb &= bb - 1;
    }
    sign
}

/// Position-based sign (−1)^t of removing the t-th smallest index from a mask.
fn removal_sign(mask: Mask, idx: u16) -> i32 {
    let below = mask & ((1 << idx) - 1);
    if popcount(below) % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DiffForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DiffForm {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: &Chart, f: RatExpr) -> Self {
        let mut form = Self::zero(chart, 0);
        form.insert_add(0, f);
        form
    }

    /// The coordinate differential d(var).
    pub fn d_var(chart: &Chart, var: &str) -> Result<Self, GeomError> {
        let i = chart
            .index_of(var)
            .ok_or_else(|| GeomError::UnknownVariable(var.to_string()))?;
        let mut form = Self::zero(chart, 1);
        form.insert_add(1 << i, RatExpr::one(chart));
        Ok(form)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add(&mut self, mask: Mask, c: RatExpr) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(popcount(mask), self.degree, "mask degree mismatch");
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in form sum");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &RatExpr) -> Self {
        if s.is_zero() {
            return Self::zero(&self.chart, self.degree);
        }
        DiffForm {
            chart: self.chart.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.mul_ref(s)))
                .collect(),
        }
    }

    pub fn scale_rat(&self, r: &crate::scalar::Rat) -> Self {
        self.scale(&RatExpr::from_rat(&self.chart, r.clone()))
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let n = self.chart.dim();
        let mut out = Self::zero(&self.chart, self.degree + 1);
        if self.degree + 1 > n {
            return out;
        }
        for (m, c) in &self.terms {
            for i in 0..n {
                let bit = 1u16 << i;
                if m & bit != 0 {
                    continue;
                }
                let dc = c.differentiate_index(i);
                if dc.is_zero() {
                    continue;
                }
                // dx_i ∧ dx_m : sign of inserting i before the elements of m.
                let sign = merge_sign(bit, *m);
                let coeff = if sign == 1 { dc } else { dc.neg_ref() };
                out.insert_add(m | bit, coeff);
            }
        }
        out
    }

    /// Wedge product (graded commutative, associative).
    pub fn wedge(&self, other: &Self) -> Result<Self, GeomError> {
        if self.chart != other.chart {
            return Err(GeomError::ChartMismatch);
        }
        let deg = self.degree + other.degree;
        let mut out = Self::zero(&self.chart, deg);
        if deg > self.chart.dim() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let sign = merge_sign(*ma, *mb);
                let c = ca.mul_ref(cb);
                out.insert_add(ma | mb, if sign == 1 { c } else { c.neg_ref() });
            }
        }
        Ok(out)
    }

    /// Interior product X ⌟ ω.
    pub fn interior(&self, x: &VectorField) -> Result<Self, GeomError> {
        if self.chart != x.chart {
            return Err(GeomError::ChartMismatch);
        }
        if self.degree == 0 {
            return Ok(Self::zero(&self.chart, 0));
        }
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (m, c) in &self.terms {
            let mut mm = *m;
            while mm != 0 {
                let i = mm.trailing_zeros() as u16;
                mm &= mm - 1;
                let xi = &x.comps[i as usize];
                if xi.is_zero() {
                    continue;
                }
                let sign = removal_sign(*m, i);
                let coeff = c.mul_ref(xi);
                out.insert_add(
                    m & !(1 << i),
                    if sign == 1 { coeff } else { coeff.neg_ref() },
                );
            }
        }
        Ok(out)
    }

    /// Cartan formula L_X = ι_X ∘ d + d ∘ ι_X.
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        let a = self.d().interior(x)?;
        let b = self.interior(x)?.d();
        Ok(a.add(&b))
    }

    /// Substitute one coordinate differential by a 1-form (e.g. restriction
    /// to the kernel of a contact form).
    pub fn eliminate(&self, var: &str, replacement: &DiffForm) -> Result<Self, GeomError> {
        assert_eq!(replacement.degree, 1);
        if replacement.chart != self.chart {
            return Err(GeomError::ChartMismatch);
        }
        let v = self
            .chart
            .index_of(var)
            .ok_or_else(|| GeomError::UnknownVariable(var.to_string()))?;
        let bit = 1u16 << v;
        let mut out = Self::zero(&self.chart, self.degree);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                out.insert_add(*m, c.clone());
                continue;
            }
            // Factor dx_v out front, substitute, and wedge back.
            let rest = m & !bit;
            let sign = removal_sign(*m, v as u16);
            let base = if sign == 1 { c.clone() } else { c.neg_ref() };
            for (rm, rc) in &replacement.terms {
                if rm & rest != 0 {
                    continue;
                }
                let s2 = merge_sign(*rm, rest);
                let coeff = base.mul_ref(rc);
                out.insert_add(
                    rm | rest,
                    if s2 == 1 { coeff } else { coeff.neg_ref() },
                );
            }
        }
        Ok(out)
    }

    /// Evaluate a 1-form on a vector field.
    pub fn pair_vf(&self, x: &VectorField) -> Result<RatExpr, GeomError> {
        assert_eq!(self.degree, 1);
        let contracted = self.interior(x)?;
        Ok(contracted
            .terms
            .get(&0)
            .cloned()
            .unwrap_or_else(|| RatExpr::zero(&self.chart)))
    }

    /// Coefficient of a coordinate differential (1-forms).
    pub fn coeff_of(&self, var: &str) -> RatExpr {
        assert_eq!(self.degree, 1);
        let i = self.chart.index_of(var).expect("chart variable");
        self.terms
            .get(&(1 << i))
            .cloned()
            .unwrap_or_else(|| RatExpr::zero(&self.chart))
    }

    /// Exact scalar proportionality: self = f · other.
    pub fn multiple_of(&self, other: &Self) -> Option<RatExpr> {
        if other.is_zero() {
            return if self.is_zero() {
                Some(RatExpr::zero(&self.chart))
            } else {
                None
            };
        }
        let (m0, c0) = other.terms.iter().next().unwrap();
        let f = self
            .terms
            .get(m0)
            .cloned()
            .unwrap_or_else(|| RatExpr::zero(&self.chart))
            .div_ref(c0);
        if self.sub(&other.scale(&f)).is_zero() {
            Some(f)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{charts, parse_scalar, Bindings};

    fn sc(c: &Chart, t: &str) -> RatExpr {
        parse_scalar(t, c, &Bindings::new()).unwrap()
    }

    #[test]
    fn d_of_contact_generator() {
        let c = charts::m5();
        // d(dp − q dx) = −dq∧dx = dx∧dq
        let omega = DiffForm::d_var(&c, "p")
            .unwrap()
            .add(&DiffForm::d_var(&c, "x").unwrap().scale(&sc(&c, "-q")));
        let d = omega.d();
        let mut expect = DiffForm::zero(&c, 2);
        let x = c.index_of("x").unwrap() as u16;
        let q = c.index_of("q").unwrap() as u16;
        expect.insert_add((1 << x) | (1 << q), RatExpr::one(&c));
        assert_eq!(d, expect);
    }

    #[test]
    fn dd_is_zero() {
        let c = charts::m5();
        let f = sc(&c, "x*y^2 + q^3/7 - z*p");
        let form = DiffForm::scalar(&c, f);
        assert!(form.d().d().is_zero());
    }

    #[test]
    fn wedge_antisymmetry_and_assoc() {
        let c = charts::m5();
        let dx = DiffForm::d_var(&c, "x").unwrap();
        let dy = DiffForm::d_var(&c, "y").unwrap();
        let dz = DiffForm::d_var(&c, "z").unwrap();
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let xy = dx.wedge(&dy).unwrap();
        let yx = dy.wedge(&dx).unwrap();
        assert_eq!(xy, yx.neg());
        let a = xy.wedge(&dz).unwrap();
        let b = dx.wedge(&dy.wedge(&dz).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interior_product_basics() {
        let c = charts::m5();
        // ∂q ⌟ (dp − q dx) = 0
        let omega = DiffForm::d_var(&c, "p")
            .unwrap()
            .add(&DiffForm::d_var(&c, "x").unwrap().scale(&sc(&c, "-q")));
        let dq = VectorField::partial(&c, "q").unwrap();
        assert!(omega.interior(&dq).unwrap().is_zero());
        // X ⌟ X ⌟ ω = 0 for a 2-form.
        let two = omega.d();
        let x = VectorField::partial(&c, "x")
            .unwrap()
            .add(&VectorField::partial(&c, "q").unwrap().scale(&sc(&c, "p")));
        let once = two.interior(&x).unwrap();
        assert!(once.interior(&x).unwrap().is_zero());
    }

    #[test]
    fn d_f_dg_equals_df_wedge_dg() {
        let c = charts::m5();
        let f = sc(&c, "x*q - z");
        let g = sc(&c, "p^2 + y");
        let fdg = DiffForm::scalar(&c, g.clone()).d().scale(&f);
        let lhs = fdg.d();
        let rhs = DiffForm::scalar(&c, f)
            .d()
            .wedge(&DiffForm::scalar(&c, g).d())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}

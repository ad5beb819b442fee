//! Symmetric covariant tensors on a chart.
//!
//! Stored as polynomials in the commuting symbols dx₁..dxₙ: a monomial
//! records the exponent of each coordinate differential. Juxtaposition in
//! formulas is the symmetrized product normalized so that a·b = (a⊗b+b⊗a)/2
//! and (dx)² = dx⊗dx, extended multilinearly; with that convention the
//! monomial coefficients evaluate on vector pairs like metric entries.

use std::collections::BTreeMap;

use crate::geomcalc::form::DiffForm;
use crate::geomcalc::vector::VectorField;
use crate::geomcalc::GeomError;
use crate::scalar::{Chart, RatExpr};

/// Exponents of dx₁..dxₙ.
pub type SymMono = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    pub chart: Chart,
    pub terms: BTreeMap<SymMono, RatExpr>,
}

impl SymTensor {
    pub fn zero(chart: &Chart) -> Self {
        SymTensor {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: &Chart, f: RatExpr) -> Self {
        let mut t = Self::zero(chart);
        t.insert_add(vec![0; chart.dim()], f);
        t
    }

    /// The degree-1 tensor d(var).
    pub fn d_var(chart: &Chart, var: &str) -> Result<Self, GeomError> {
        let i = chart
            .index_of(var)
            .ok_or_else(|| GeomError::UnknownVariable(var.to_string()))?;
        let mut mono = vec![0u8; chart.dim()];
        mono[i] = 1;
        let mut t = Self::zero(chart);
        t.insert_add(mono, RatExpr::one(chart));
        Ok(t)
    }

    pub fn from_one_form(form: &DiffForm) -> Self {
        assert_eq!(form.degree, 1);
        let chart = &form.chart;
        let mut t = Self::zero(chart);
        for (m, c) in &form.terms {
            let i = m.trailing_zeros() as usize;
            let mut mono = vec![0u8; chart.dim()];
            mono[i] = 1;
            t.insert_add(mono, c.clone());
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Uniform degree when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d: usize = m.iter().map(|&e| e as usize).sum();
            match deg {
                None => deg = Some(d),
                Some(x) if x == d => {}
                _ => return None,
            }
        }
        deg.or(Some(0))
    }

    pub fn insert_add(&mut self, m: SymMono, c: RatExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SymTensor {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &RatExpr) -> Self {
        if s.is_zero() {
            return Self::zero(&self.chart);
        }
        SymTensor {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_ref(s)))
                .collect(),
        }
    }

    /// Symmetric (commutative polynomial) product.
    pub fn mul(&self, other: &Self) -> Result<Self, GeomError> {
        if self.chart != other.chart {
            return Err(GeomError::ChartMismatch);
        }
        let mut out = Self::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: SymMono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.insert_add(m, ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::scalar(&self.chart, RatExpr::one(&self.chart));
        for _ in 0..e {
            acc = acc.mul(self).expect("same chart");
        }
        acc
    }

    /// Lie derivative: derivation on coefficients and on each slot,
    /// L_X dxᵢ = d(Xⁱ).
    pub fn lie_derivative(&self, x: &VectorField) -> Result<Self, GeomError> {
        if self.chart != x.chart {
            return Err(GeomError::ChartMismatch);
        }
        let n = self.chart.dim();
        // d(X^i) as symmetric degree-1 tensors.
        let dx_images: Vec<SymTensor> = (0..n)
            .map(|i| {
                let mut t = SymTensor::zero(&self.chart);
                for j in 0..n {
                    let dc = x.comps[i].differentiate_index(j);
                    if dc.is_zero() {
                        continue;
                    }
                    let mut mono = vec![0u8; n];
                    mono[j] = 1;
                    t.insert_add(mono, dc);
                }
                t
            })
            .collect();
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            // Coefficient derivative.
            out.insert_add(m.clone(), x.apply(c));
            // Slot derivatives.
            for i in 0..n {
                if m[i] == 0 {
                    continue;
                }
                let mut reduced = m.clone();
                reduced[i] -= 1;
                let mult = RatExpr::from_int(&self.chart, m[i] as i64).mul_ref(c);
                for (im, ic) in &dx_images[i].terms {
                    let combined: SymMono =
                        reduced.iter().zip(im).map(|(a, b)| a + b).collect();
                    out.insert_add(combined, mult.mul_ref(ic));
                }
            }
        }
        Ok(out)
    }

    /// Substitute one coordinate differential by a degree-1 tensor.
    pub fn eliminate(&self, var: &str, replacement: &SymTensor) -> Result<Self, GeomError> {
        if replacement.chart != self.chart {
            return Err(GeomError::ChartMismatch);
        }
        let v = self
            .chart
            .index_of(var)
            .ok_or_else(|| GeomError::UnknownVariable(var.to_string()))?;
        let mut out = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m[v];
            if e == 0 {
                out.insert_add(m.clone(), c.clone());
                continue;
            }
            let mut base = m.clone();
            base[v] = 0;
            let mut piece = Self::zero(&self.chart);
            piece.insert_add(base, c.clone());
            let powed = replacement.pow(e as u32);
            let product = piece.mul(&powed)?;
            for (pm, pc) in product.terms {
                out.insert_add(pm, pc);
            }
        }
        Ok(out)
    }

    /// Evaluate a degree-2 tensor on a pair of vector fields using the
    /// (a⊗b+b⊗a)/2 convention.
    pub fn eval2(&self, u: &VectorField, v: &VectorField) -> Result<RatExpr, GeomError> {
        if u.chart != self.chart || v.chart != self.chart {
            return Err(GeomError::ChartMismatch);
        }
        let n = self.chart.dim();
        let mut acc = RatExpr::zero(&self.chart);
        for (m, c) in &self.terms {
            let idx: Vec<usize> = (0..n)
                .flat_map(|i| std::iter::repeat(i).take(m[i] as usize))
                .collect();
            assert_eq!(idx.len(), 2, "eval2 needs a degree-2 tensor");
            let (i, j) = (idx[0], idx[1]);
            let val = if i == j {
                u.comps[i].mul_ref(&v.comps[i])
            } else {
                u.comps[i]
                    .mul_ref(&v.comps[j])
                    .add_ref(&u.comps[j].mul_ref(&v.comps[i]))
                    .mul_rat(&crate::scalar::rat(1, 2))
            };
            acc = acc.add_ref(&c.mul_ref(&val));
        }
        Ok(acc)
    }

    /// Does any monomial involve one of the listed variables?
    pub fn uses_vars(&self, vars: &[&str]) -> bool {
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| self.chart.index_of(v).expect("chart variable"))
            .collect();
        self.terms
            .keys()
            .any(|m| idx.iter().any(|&i| m[i] != 0))
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

/// Outcome of `proportional_mod`.
#[derive(Clone, Debug)]
pub enum PropMod {
    Yes { factor: RatExpr },
    No { certificate: (SymMono, SymMono) },
}

/// Test T₁ ≡ f·T₂ modulo the ideal generated by a contact form λ: both
/// tensors are restricted to ker λ by eliminating d(solve_var) and compared
/// for exact proportionality.
pub fn proportional_mod(
    t1: &SymTensor,
    t2: &SymTensor,
    lambda: &DiffForm,
    solve_var: &str,
) -> Result<PropMod, GeomError> {
    assert_eq!(lambda.degree, 1);
    let chart = &t1.chart;
    if t2.chart != *chart || lambda.chart != *chart {
        return Err(GeomError::ChartMismatch);
    }
    let coeff = lambda.coeff_of(solve_var);
    if coeff.is_zero() {
        return Err(GeomError::NotEliminable(solve_var.to_string()));
    }
    // On ker λ: d(solve_var) = −(λ − coeff·d(solve_var))/coeff.
    let v = chart.index_of(solve_var).unwrap();
    let mut repl = SymTensor::zero(chart);
    for (m, c) in &lambda.terms {
        let i = m.trailing_zeros() as usize;
        if i == v {
            continue;
        }
        let mut mono = vec![0u8; chart.dim()];
        mono[i] = 1;
        repl.insert_add(mono, c.div_ref(&coeff).neg_ref());
    }
    let r1 = t1.eliminate(solve_var, &repl)?;
    let r2 = t2.eliminate(solve_var, &repl)?;
    if let Some(f) = r1.multiple_of(&r2) {
        return Ok(PropMod::Yes { factor: f });
    }
    // Produce a certificate: two monomials with inconsistent ratios.
    let witness = find_ratio_conflict(&r1, &r2);
    Ok(PropMod::No {
        certificate: witness,
    })
}

fn find_ratio_conflict(a: &SymTensor, b: &SymTensor) -> (SymMono, SymMono) {
    // Either a monomial present on one side only, or two with unequal ratios.
    for (m, _) in a.terms.iter() {
        if !b.terms.contains_key(m) {
            return (m.clone(), m.clone());
        }
    }
    for (m, _) in b.terms.iter() {
        if !a.terms.contains_key(m) {
            return (m.clone(), m.clone());
        }
    }
    let mut seen: Option<(SymMono, RatExpr)> = None;
    for (m, ca) in &a.terms {
        let cb = &b.terms[m];
        let r = ca.div_ref(cb);
        match &seen {
            None => seen = Some((m.clone(), r)),
            Some((m0, r0)) => {
                if !r0.equals(&r) {
                    return (m0.clone(), m.clone());
                }
            }
        }
    }
    unreachable!("called only when proportionality fails")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{charts, parse_scalar, rat, Bindings};

    fn sc(c: &Chart, t: &str) -> RatExpr {
        parse_scalar(t, c, &Bindings::new()).unwrap()
    }

    #[test]
    fn symmetric_product_convention() {
        let c = charts::m5();
        let dx = SymTensor::d_var(&c, "x").unwrap();
        let dy = SymTensor::d_var(&c, "y").unwrap();
        let g = dx.mul(&dy).unwrap();
        // (dx·dy)(∂x, ∂y) = 1/2
        let ex = VectorField::partial(&c, "x").unwrap();
        let ey = VectorField::partial(&c, "y").unwrap();
        assert!(g.eval2(&ex, &ey).unwrap().equals(&RatExpr::from_rat(&c, rat(1, 2))));
        // (dx)²(∂x, ∂x) = 1
        let g2 = dx.pow(2);
        assert!(g2.eval2(&ex, &ex).unwrap().is_one());
    }

    #[test]
    fn lie_derivative_is_a_derivation() {
        let c = charts::m5();
        let x = VectorField::partial(&c, "x")
            .unwrap()
            .add(&VectorField::partial(&c, "y").unwrap().scale(&sc(&c, "p")))
            .add(&VectorField::partial(&c, "p").unwrap().scale(&sc(&c, "q")));
        let a = SymTensor::d_var(&c, "y").unwrap().scale(&sc(&c, "q"));
        let b = SymTensor::d_var(&c, "p").unwrap();
        let ab = a.mul(&b).unwrap();
        let lhs = ab.lie_derivative(&x).unwrap();
        let rhs = a
            .lie_derivative(&x)
            .unwrap()
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.lie_derivative(&x).unwrap()).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn proportional_mod_trivial_and_negative() {
        let c = charts::m5();
        // λ = dz − q dp
        let lambda = DiffForm::d_var(&c, "z")
            .unwrap()
            .add(&DiffForm::d_var(&c, "p").unwrap().scale(&sc(&c, "-q")));
        let dz = SymTensor::d_var(&c, "z").unwrap();
        let dp = SymTensor::d_var(&c, "p").unwrap();
        let zero = SymTensor::zero(&c);
        // T1 = 0 → Yes(0).
        match proportional_mod(&zero, &dp.pow(2), &lambda, "z").unwrap() {
            PropMod::Yes { factor } => assert!(factor.is_zero()),
            _ => panic!(),
        }
        // dz² restricted equals q²·dp²: proportional with factor q².
        match proportional_mod(&dz.pow(2), &dp.pow(2), &lambda, "z").unwrap() {
            PropMod::Yes { factor } => assert!(factor.equals(&sc(&c, "q^2"))),
            _ => panic!(),
        }
        // dx² is not a multiple of dp².
        let dx = SymTensor::d_var(&c, "x").unwrap();
        match proportional_mod(&dx.pow(2), &dp.pow(2), &lambda, "z").unwrap() {
            PropMod::No { .. } => {}
            _ => panic!(),
        }
    }

    #[test]
    fn not_eliminable_reported() {
        let c = charts::m5();
        let lambda = DiffForm::d_var(&c, "z").unwrap();
        let t = SymTensor::d_var(&c, "x").unwrap();
        assert!(matches!(
            proportional_mod(&t, &t, &lambda, "x"),
            Err(GeomError::NotEliminable(_))
        ));
    }
}

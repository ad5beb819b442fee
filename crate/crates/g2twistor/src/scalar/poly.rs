//! Multivariate polynomials over ℚ(6^{1/3}) with rational exponents allowed in
//! one distinguished variable.
//!
//! Exponents are stored densely per chart variable as reduced `Ratio<i64>`;
//! every exponent is ≥ 0 (negative powers live in a `RatExpr` denominator).
//! Term order is lexicographic on the chart's declared variable order.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::scalar::coef::{Coef, Rat};

/// Exponent type: rational with machine-sized parts. Non-distinguished
/// variables always carry integral values.
pub type Exp = Ratio<i64>;

pub fn exp_int(n: i64) -> Exp {
    Exp::from_integer(n)
}

/// A power product, dense over the chart's variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<Exp>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![Exp::zero(); nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = exp_int(1);
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn total_degree(&self) -> Exp {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Quotient; caller guarantees divisibility (all result exponents ≥ 0).
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }
}

/// Polynomial: map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, Coef>,
    pub nvars: usize,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(nvars: usize, c: Coef) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Coef::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial::var(nvars, i), Coef::one());
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Coef) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Coef> {
        if self.is_zero() {
            return Some(Coef::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, m: Monomial, c: Coef) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.insert_add(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.insert_add(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.insert_add(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn mul_coef(&self, c: &Coef) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
            nvars: self.nvars,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
            nvars: self.nvars,
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading (largest in lex order) term.
    pub fn leading(&self) -> Option<(&Monomial, &Coef)> {
        self.terms.iter().next_back()
    }

    /// Largest power product dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(self.nvars),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    /// Divide out an (everywhere dividing) monomial.
    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m), c.clone()))
                .collect(),
            nvars: self.nvars,
        }
    }

    /// Degree in variable `v` (0 for the zero polynomial).
    pub fn degree_in(&self, v: usize) -> Exp {
        self.terms
            .keys()
            .map(|m| m.0[v])
            .max()
            .unwrap_or_else(Exp::zero)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| !m.0[v].is_zero())
    }

    /// d(self)/d(var) is returned as `poly / var`; shifting by one power keeps
    /// all exponents non-negative even for fractional powers.
    pub fn derivative_shifted(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e.is_zero() {
                continue;
            }
            let scale = Coef::from_rat(Rat::new((*e.numer()).into(), (*e.denom()).into()));
            r.insert_add(m.clone(), c * &scale);
        }
        r
    }

    /// Exact multivariate division: `self = q * d` ⇒ `Some(q)`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        let (dm, dc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let dc_inv = dc.inv();
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = &rc * &dc_inv;
            q.insert_add(qm.clone(), qc.clone());
            let sub = d.mul_monomial(&qm).mul_coef(&qc);
            rem = rem.sub(&sub);
        }
        Some(q)
    }

    /// Scale the exponents of one variable by an integer factor (used to clear
    /// fractional exponents before gcd computations).
    fn scale_var_exponents(&self, v: usize, factor: i64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.clone();
                    mm.0[v] *= Exp::from_integer(factor);
                    (mm, c.clone())
                })
                .collect(),
            nvars: self.nvars,
        }
    }

    fn unscale_var_exponents(&self, v: usize, factor: i64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut mm = m.clone();
                    mm.0[v] /= Exp::from_integer(factor);
                    (mm, c.clone())
                })
                .collect(),
            nvars: self.nvars,
        }
    }

    /// GCD over the coefficient field, unique up to the normalization that the
    /// leading coefficient is one.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // Clear fractional exponents: only the distinguished variable can carry
        // them, but scanning every variable costs nothing.
        let mut a = self.clone();
        let mut b = other.clone();
        let mut scale: Vec<i64> = vec![1; self.nvars];
        for v in 0..self.nvars {
            let mut l: i64 = 1;
            for p in [&a, &b] {
                for m in p.terms.keys() {
                    l = num_integer::lcm(l, *m.0[v].denom());
                }
            }
            if l != 1 {
                a = a.scale_var_exponents(v, l);
                b = b.scale_var_exponents(v, l);
                scale[v] = l;
            }
        }
        let mut g = gcd_integer_exponents(&a, &b);
        for v in 0..self.nvars {
            if scale[v] != 1 {
                g = g.unscale_var_exponents(v, scale[v]);
            }
        }
        g.monic()
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                if c.is_one() {
                    self.clone()
                } else {
                    self.mul_coef(&c.inv())
                }
            }
        }
    }

    /// Least common multiple (up to scalars).
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        let g = self.gcd(other);
        self.mul(&other.div_exact(&g).expect("gcd divides"))
    }
}

/// GCD for polynomials whose exponents are all integral.
fn gcd_integer_exponents(a: &Poly, b: &Poly) -> Poly {
    // Pull out monomial content first.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let ap = a.div_monomial(&ma);
    let bp = b.div_monomial(&mb);
    let core = gcd_primitive(&ap, &bp);
    core.mul_monomial(&mg)
}

fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    if a == b {
        return a.clone();
    }
    // Cheap exits: one divides the other.
    if let Some(_q) = a.div_exact(b) {
        return b.monic();
    }
    if let Some(_q) = b.div_exact(a) {
        return a.monic();
    }
    // Main variable: highest index used by either.
    let nv = a.nvars;
    let v = (0..nv)
        .rev()
        .find(|&v| a.uses_var(v) || b.uses_var(v))
        .expect("non-constant polynomial uses a variable");
    let ua = UniPoly::from_poly(a, v);
    let ub = UniPoly::from_poly(b, v);
    let (ca, pa) = ua.content_primitive();
    let (cb, pb) = ub.content_primitive();
    let cg = ca.gcd(&cb);
    let prim = primitive_prs(pa, pb, v);
    prim.to_poly(v).mul(&cg)
}

/// Subresultant-free primitive pseudo-remainder sequence.
fn primitive_prs(mut a: UniPoly, mut b: UniPoly, _v: usize) -> UniPoly {
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a.primitive();
        }
        if b.degree() == 0 {
            // Nonzero constant (in the main variable): primitive gcd is 1 in v,
            // the content gcd was handled by the caller.
            return UniPoly::one(a.nvars());
        }
        let r = a.pseudo_rem(&b);
        a = b;
        b = r.primitive();
    }
}

/// Univariate polynomial in a chosen main variable with `Poly` coefficients.
struct UniPoly {
    /// coeffs[d] multiplies v^d; coefficients do not use the main variable.
    coeffs: Vec<Poly>,
}

impl UniPoly {
    fn nvars(&self) -> usize {
        self.coeffs[0].nvars
    }

    fn one(nvars: usize) -> Self {
        UniPoly {
            coeffs: vec![Poly::one(nvars)],
        }
    }

    fn from_poly(p: &Poly, v: usize) -> Self {
        let deg = p.degree_in(v);
        assert!(deg.is_integer() && !deg.is_negative());
        let deg = deg.to_integer() as usize;
        let mut coeffs = vec![Poly::zero(p.nvars); deg + 1];
        for (m, c) in &p.terms {
            let e = m.0[v];
            assert!(e.is_integer());
            let mut mm = m.clone();
            mm.0[v] = Exp::zero();
            coeffs[e.to_integer() as usize].insert_add(mm, c.clone());
        }
        UniPoly { coeffs }
    }

    fn to_poly(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nvars());
        for (d, c) in self.coeffs.iter().enumerate() {
            let mut shift = Monomial::one(self.nvars());
            shift.0[v] = exp_int(d as i64);
            r = r.add(&c.mul_monomial(&shift));
        }
        r
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn lc(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// Content (gcd of coefficients) and primitive part.
    fn content_primitive(&self) -> (Poly, UniPoly) {
        let mut cont = Poly::zero(self.nvars());
        for c in &self.coeffs {
            if !c.is_zero() {
                cont = if cont.is_zero() {
                    c.monic()
                } else {
                    cont.gcd(c)
                };
            }
        }
        if cont.is_zero() {
            cont = Poly::one(self.nvars());
        }
        let prim = UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        c.clone()
                    } else {
                        c.div_exact(&cont).expect("content divides")
                    }
                })
                .collect(),
        };
        (cont, prim)
    }

    fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly {
                coeffs: vec![Poly::zero(self.nvars())],
            };
        }
        self.content_primitive().1
    }

    /// Pseudo-remainder of self by d (lc(d)^(δ+1) · self mod d).
    fn pseudo_rem(&self, d: &UniPoly) -> UniPoly {
        let mut r = UniPoly {
            coeffs: self.coeffs.clone(),
        };
        r.trim();
        let dd = d.degree();
        let lcd = d.lc().clone();
        while !r.is_zero() && r.degree() >= dd {
            let rd = r.degree();
            let lead = r.coeffs[rd].clone();
            // r := lc(d)·r − lead·v^(rd−dd)·d
            for c in r.coeffs.iter_mut() {
                *c = c.mul(&lcd);
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let idx = rd - dd + i;
                let sub = dc.mul(&lead);
                r.coeffs[idx] = r.coeffs[idx].sub(&sub);
            }
            r.trim();
            if r.degree() == rd && !r.coeffs[rd].is_zero() {
                unreachable!("pseudo-division must reduce the degree");
            }
            while r.coeffs.len() > 1 && r.coeffs.last().unwrap().is_zero() {
                r.coeffs.pop();
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_of(nv: usize, terms: &[(&[i64], i64)]) -> Poly {
        let mut p = Poly::zero(nv);
        for (exps, c) in terms {
            let m = Monomial(exps.iter().map(|&e| exp_int(e)).collect());
            p.insert_add(m, Coef::from_int(*c));
        }
        p
    }

    #[test]
    fn mul_and_div_exact_roundtrip() {
        // (x + y)(x − y) = x² − y²
        let a = p_of(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p_of(2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, p_of(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(p_of(2, &[(&[2, 0], 1)]).div_exact(&a).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        // gcd((x+y)²·x, (x+y)·y) = x + y
        let s = p_of(2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let a = s.mul(&s).mul(&p_of(2, &[(&[1, 0], 1)]));
        let b = s.mul(&p_of(2, &[(&[0, 1], 1)]));
        let g = a.gcd(&b);
        assert_eq!(g, s.monic());
    }

    #[test]
    fn gcd_with_fractional_exponents() {
        // gcd(q^(1/3)·(q+1), q·(q+1)) = q^(1/3)(q+1)
        let mut qthird = Monomial::one(1);
        qthird.0[0] = Ratio::new(1, 3);
        let q13 = Poly::monomial(1, qthird, Coef::one());
        let qp1 = p_of(1, &[(&[1], 1), (&[0], 1)]);
        let a = q13.mul(&qp1);
        let b = p_of(1, &[(&[1], 1)]).mul(&qp1);
        let g = a.gcd(&b);
        assert_eq!(g, q13.mul(&qp1).monic());
    }
}

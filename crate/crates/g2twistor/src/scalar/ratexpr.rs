//! The universal scalar: an exact rational function on a chart.
//!
//! Values are reduced fractions `num/den` of [`Poly`]s. Normalization cancels
//! the polynomial gcd (after clearing fractional exponents by a common shift),
//! and scales the denominator's leading coefficient to one, so equal values
//! have equal representations and the zero test is structural.

use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::chart::Chart;
use crate::scalar::coef::{nth_root_exact, Coef, Rat};
use crate::scalar::poly::{exp_int, Exp, Monomial, Poly};
use crate::scalar::ScalarError;

#[derive(Clone, PartialEq, Eq)]
pub struct RatExpr {
    pub chart: Chart,
    pub num: Poly,
    pub den: Poly,
}

impl RatExpr {
    pub fn zero(chart: &Chart) -> Self {
        RatExpr {
            chart: chart.clone(),
            num: Poly::zero(chart.dim()),
            den: Poly::one(chart.dim()),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::from_int(chart, 1)
    }

    pub fn from_coef(chart: &Chart, c: Coef) -> Self {
        RatExpr {
            chart: chart.clone(),
            num: Poly::constant(chart.dim(), c),
            den: Poly::one(chart.dim()),
        }
    }

    pub fn from_rat(chart: &Chart, r: Rat) -> Self {
        Self::from_coef(chart, Coef::from_rat(r))
    }

    pub fn from_int(chart: &Chart, n: i64) -> Self {
        Self::from_coef(chart, Coef::from_int(n))
    }

    pub fn var(chart: &Chart, name: &str) -> Result<Self, ScalarError> {
        let i = chart
            .index_of(name)
            .ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))?;
        Ok(RatExpr {
            chart: chart.clone(),
            num: Poly::var(chart.dim(), i),
            den: Poly::one(chart.dim()),
        })
    }

    pub fn var_index(chart: &Chart, i: usize) -> Self {
        RatExpr {
            chart: chart.clone(),
            num: Poly::var(chart.dim(), i),
            den: Poly::one(chart.dim()),
        }
    }

    /// `var^e` for a rational exponent; negative exponents go to the
    /// denominator. Fractional exponents require the distinguished variable.
    pub fn var_pow(chart: &Chart, i: usize, e: Exp) -> Result<Self, ScalarError> {
        if !e.is_integer() && chart.fractional() != Some(i) {
            return Err(ScalarError::FractionalExponentOnNonDistinguishedVariable(
                chart.var_name(i).to_string(),
            ));
        }
        let nv = chart.dim();
        let mut m = Monomial::one(nv);
        let mut r = RatExpr::one(chart);
        if e.is_negative() {
            m.0[i] = -e;
            r.den = Poly::monomial(nv, m, Coef::one());
        } else {
            m.0[i] = e;
            r.num = Poly::monomial(nv, m, Coef::one());
        }
        Ok(r)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Coef> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(&n * &d.inv())
    }

    /// Reduce to canonical form. Idempotent.
    pub fn normalized(mut num: Poly, mut den: Poly, chart: &Chart) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(chart);
        }
        // Monomial cancellation is cheap and covers the ubiquitous pure-power
        // denominators (w^k, fractional q powers).
        let mn = num.monomial_content();
        let md = den.monomial_content();
        let g = mn.gcd(&md);
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        // Denominator leading coefficient becomes one.
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.mul_coef(&inv);
            den = den.mul_coef(&inv);
        }
        RatExpr {
            chart: chart.clone(),
            num,
            den,
        }
    }

    fn same_chart(&self, other: &RatExpr) {
        assert!(
            self.chart == other.chart,
            "scalar arithmetic across different charts: {:?} vs {:?}",
            self.chart,
            other.chart
        );
    }

    pub fn add_ref(&self, other: &RatExpr) -> RatExpr {
        self.same_chart(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (num, den) = if self.den == other.den {
            (self.num.add(&other.num), self.den.clone())
        } else {
            (
                self.num.mul(&other.den).add(&other.num.mul(&self.den)),
                self.den.mul(&other.den),
            )
        };
        Self::normalized(num, den, &self.chart)
    }

    pub fn sub_ref(&self, other: &RatExpr) -> RatExpr {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &RatExpr) -> RatExpr {
        self.same_chart(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.chart);
        }
        Self::normalized(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            &self.chart,
        )
    }

    pub fn div_ref(&self, other: &RatExpr) -> RatExpr {
        self.same_chart(other);
        assert!(!other.is_zero(), "division by zero expression");
        if self.is_zero() {
            return Self::zero(&self.chart);
        }
        Self::normalized(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
            &self.chart,
        )
    }

    pub fn neg_ref(&self) -> RatExpr {
        RatExpr {
            chart: self.chart.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> RatExpr {
        assert!(!self.is_zero(), "inverting zero expression");
        Self::normalized(self.den.clone(), self.num.clone(), &self.chart)
    }

    pub fn mul_coef(&self, c: &Coef) -> RatExpr {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        RatExpr {
            chart: self.chart.clone(),
            num: self.num.mul_coef(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> RatExpr {
        self.mul_coef(&Coef::from_rat(r.clone()))
    }

    pub fn pow_int(&self, e: i64) -> RatExpr {
        if e == 0 {
            return Self::one(&self.chart);
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one(&self.chart);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul_ref(&base);
        }
        acc
    }

    /// Exact partial derivative with respect to a chart variable.
    pub fn differentiate(&self, var: &str) -> Result<RatExpr, ScalarError> {
        let v = self
            .chart
            .index_of(var)
            .ok_or_else(|| ScalarError::UnknownVariable(var.to_string()))?;
        Ok(self.differentiate_index(v))
    }

    pub fn differentiate_index(&self, v: usize) -> RatExpr {
        // d(n/d) = (n' d − n d') / d²; Poly derivatives are returned scaled by
        // the variable, so the quotient picks up one extra factor.
        let np = self.num.derivative_shifted(v);
        let dp = self.den.derivative_shifted(v);
        let num = np.mul(&self.den).sub(&self.num.mul(&dp));
        let den = self
            .den
            .mul(&self.den)
            .mul(&Poly::var(self.chart.dim(), v));
        if num.is_zero() {
            return Self::zero(&self.chart);
        }
        Self::normalized(num, den, &self.chart)
    }

    /// Simultaneous exact substitution. `assignment[i]` (on `target`) replaces
    /// chart variable `i`; fractional powers of the distinguished variable
    /// demand a substitution that has exact rational powers.
    pub fn substitute(
        &self,
        target: &Chart,
        assignment: &[RatExpr],
    ) -> Result<RatExpr, ScalarError> {
        assert_eq!(assignment.len(), self.chart.dim());
        for a in assignment {
            assert!(a.chart == *target, "assignment value on wrong chart");
        }
        let num = substitute_poly(&self.num, &self.chart, target, assignment)?;
        let den = substitute_poly(&self.den, &self.chart, target, assignment)?;
        let (nn, nd) = (num.num.mul(&den.den), num.den.mul(&den.num));
        if nd.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if nn.is_zero() {
            return Ok(RatExpr::zero(target));
        }
        Ok(RatExpr::normalized(nn, nd, target))
    }

    /// Substitute a single variable (all others map to themselves on the same chart).
    pub fn substitute_one(&self, var: &str, value: &RatExpr) -> Result<RatExpr, ScalarError> {
        let v = self
            .chart
            .index_of(var)
            .ok_or_else(|| ScalarError::UnknownVariable(var.to_string()))?;
        let mut assignment: Vec<RatExpr> = (0..self.chart.dim())
            .map(|i| RatExpr::var_index(&self.chart, i))
            .collect();
        assignment[v] = value.clone();
        self.substitute(&self.chart, &assignment)
    }

    /// Structural equality of values: a − b = 0.
    pub fn equals(&self, other: &RatExpr) -> bool {
        self.sub_ref(other).is_zero()
    }
}

/// Raise an expression to a possibly fractional power: integral powers work
/// for anything; fractional powers need a bare variable (the distinguished
/// one) or a constant with an exact root or adjoined radical.
pub fn pow_fractional(base: &RatExpr, e: Exp) -> Result<RatExpr, ScalarError> {
    // Only single variables and exact rational roots of positive constants can
    // be raised to fractional powers.
    if e.is_integer() {
        return Ok(base.pow_int(e.to_integer()));
    }
    let chart = &base.chart;
    if let Some(c) = base.constant_value() {
        if let Some(r) = c.as_rat() {
            if r.is_positive() {
                if let Some(root) = nth_root_exact(r, *e.denom() as u32) {
                    let mut acc = Rat::from_integer(1.into());
                    let p = *e.numer();
                    for _ in 0..p.unsigned_abs() {
                        acc *= root.clone();
                    }
                    if p < 0 {
                        acc = acc.recip();
                    }
                    return Ok(RatExpr::from_rat(chart, acc));
                }
                // 6^(m/3) is adjoined.
                if *r == Rat::from_integer(6.into()) && *e.denom() == 3 {
                    return Ok(RatExpr::from_coef(chart, Coef::radical_pow(*e.numer())));
                }
            }
        }
        return Err(ScalarError::IllegalFractionalSubstitution(format!(
            "cannot raise constant {base} to power {e} exactly"
        )));
    }
    // A bare (positive power of a) variable.
    if base.den.is_constant() && base.num.num_terms() == 1 {
        let (m, c) = base.num.leading().unwrap();
        let dc = base.den.constant_value().unwrap();
        if c.is_one() && dc.is_one() {
            let used: Vec<usize> = (0..chart.dim()).filter(|&i| !m.0[i].is_zero()).collect();
            if used.len() == 1 {
                let i = used[0];
                return RatExpr::var_pow(chart, i, m.0[i] * e);
            }
        }
    }
    Err(ScalarError::IllegalFractionalSubstitution(format!(
        "fractional power {e} of a non-variable expression"
    )))
}

fn substitute_poly(
    p: &Poly,
    source: &Chart,
    target: &Chart,
    assignment: &[RatExpr],
) -> Result<RatExpr, ScalarError> {
    let mut acc = RatExpr::zero(target);
    for (m, c) in &p.terms {
        let mut term = RatExpr::from_coef(target, c.clone());
        for i in 0..source.dim() {
            let e = m.0[i];
            if e.is_zero() {
                continue;
            }
            let factor = if e.is_integer() {
                assignment[i].pow_int(e.to_integer())
            } else {
                pow_fractional(&assignment[i], e)?
            };
            term = term.mul_ref(&factor);
        }
        acc = acc.add_ref(&term);
    }
    Ok(acc)
}

impl Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        self.add_ref(rhs)
    }
}
impl Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self.sub_ref(rhs)
    }
}
impl Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        self.mul_ref(rhs)
    }
}
impl Div for &RatExpr {
    type Output = RatExpr;
    fn div(self, rhs: &RatExpr) -> RatExpr {
        self.div_ref(rhs)
    }
}
impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        self.neg_ref()
    }
}

// ---------------------------------------------------------------------------
// Canonical printing. Round-trips through the expression parser.
// ---------------------------------------------------------------------------

fn fmt_exp(e: &Exp) -> String {
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

fn fmt_monomial(chart: &Chart, m: &Monomial) -> Option<String> {
    let mut parts = Vec::new();
    for i in 0..chart.dim() {
        let e = m.0[i];
        if e.is_zero() {
            continue;
        }
        if e == exp_int(1) {
            parts.push(chart.var_name(i).to_string());
        } else {
            parts.push(format!("{}^{}", chart.var_name(i), fmt_exp(&e)));
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

pub(crate) fn fmt_poly(chart: &Chart, p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // Descending lex order: largest monomial first.
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let mono = fmt_monomial(chart, m);
        let (sign_neg, mag) = coef_magnitude(c);
        if i == 0 {
            if sign_neg {
                out.push('-');
            }
        } else if sign_neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        match (&mono, mag.is_one()) {
            (Some(ms), true) => out.push_str(ms),
            (Some(ms), false) => {
                out.push_str(&format!("{mag}"));
                out.push('*');
                out.push_str(ms);
            }
            (None, _) => out.push_str(&format!("{mag}")),
        }
    }
    out
}

/// Splits a coefficient into a printable sign and magnitude. For elements with
/// radical parts the split follows the exact real sign.
fn coef_magnitude(c: &Coef) -> (bool, Coef) {
    if c.sign() < 0 {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let d = self.den.constant_value().unwrap();
            if d.is_one() {
                return write!(f, "{}", fmt_poly(&self.chart, &self.num));
            }
        }
        let n = fmt_poly(&self.chart, &self.num);
        let d = fmt_poly(&self.chart, &self.den);
        let n_wrapped = if self.num.num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d_wrapped = if self.den.num_terms() > 1 || self.den.leading().map(|(m, c)| !m.is_one() && !c.is_one()).unwrap_or(false)
        {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n_wrapped}/{d_wrapped}")
    }
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Evaluate at a rational point. Fractional powers of the distinguished
/// variable require the supplied value to have an exact root.
pub fn eval_at(e: &RatExpr, point: &[Rat]) -> Result<Coef, ScalarError> {
    assert_eq!(point.len(), e.chart.dim());
    let eval_poly = |p: &Poly| -> Result<Coef, ScalarError> {
        let mut acc = Coef::zero();
        for (m, c) in &p.terms {
            let mut t = c.clone();
            for i in 0..e.chart.dim() {
                let ex = m.0[i];
                if ex.is_zero() {
                    continue;
                }
                let base = &point[i];
                let val = if ex.is_integer() {
                    let mut v = Rat::from_integer(1.into());
                    for _ in 0..ex.to_integer().unsigned_abs() {
                        v *= base.clone();
                    }
                    if ex.is_negative() {
                        v = v.recip();
                    }
                    v
                } else {
                    let root = nth_root_exact(base, *ex.denom() as u32).ok_or_else(|| {
                        ScalarError::IllegalFractionalSubstitution(format!(
                            "point value {base} for `{}` has no exact {}-th root",
                            e.chart.var_name(i),
                            ex.denom()
                        ))
                    })?;
                    let mut v = Rat::from_integer(1.into());
                    for _ in 0..ex.numer().unsigned_abs() {
                        v *= root.clone();
                    }
                    if ex.is_negative() {
                        v = v.recip();
                    }
                    v
                };
                t = &t * &Coef::from_rat(val);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    };
    let n = eval_poly(&e.num)?;
    let d = eval_poly(&e.den)?;
    if d.is_zero() {
        return Err(ScalarError::DivisionByZero);
    }
    Ok(&n * &d.inv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::chart::charts;

    fn q_pow(chart: &Chart, e: Exp) -> RatExpr {
        RatExpr::var_pow(chart, chart.index_of("q").unwrap(), e).unwrap()
    }

    #[test]
    fn normalization_cancels() {
        let c = charts::m5();
        let x = RatExpr::var(&c, "x").unwrap();
        let y = RatExpr::var(&c, "y").unwrap();
        let s = &x + &y;
        let e = &(&s * &s) / &s;
        assert!(e.equals(&s));
        // (x+y)² − x² − 2xy − y² = 0
        let two_xy = (&x * &y).mul_rat(&crate::scalar::coef::rint(2));
        let z = &(&(&(&s * &s) - &(&x * &x)) - &two_xy) - &(&y * &y);
        assert!(z.is_zero());
    }

    #[test]
    fn derivative_power_rule_fractional() {
        let c = charts::m5();
        // d/dq q^{5/2} = (5/2) q^{3/2}
        let e = q_pow(&c, Exp::new(5, 2));
        let d = e.differentiate("q").unwrap();
        let expect = q_pow(&c, Exp::new(3, 2)).mul_rat(&crate::scalar::coef::rat(5, 2));
        assert!(d.equals(&expect));
    }

    #[test]
    fn derivative_quotient_rule() {
        let c = charts::m7();
        // d/dw (1/w^4) = -4/w^5
        let e = RatExpr::var_pow(&c, c.index_of("w").unwrap(), exp_int(-4)).unwrap();
        let d = e.differentiate("w").unwrap();
        let expect = RatExpr::var_pow(&c, c.index_of("w").unwrap(), exp_int(-5))
            .unwrap()
            .mul_rat(&crate::scalar::coef::rint(-4));
        assert!(d.equals(&expect));
    }

    #[test]
    fn substitution_boundary() {
        let c = charts::m7();
        // e = wq − vp + q²/2, w→0 ⇒ −vp + q²/2
        let w = RatExpr::var(&c, "w").unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        let v = RatExpr::var(&c, "v").unwrap();
        let p = RatExpr::var(&c, "p").unwrap();
        let e = &(&(&w * &q) - &(&v * &p)) + &(&q * &q).mul_rat(&crate::scalar::coef::rat(1, 2));
        let r = e.substitute_one("w", &RatExpr::zero(&c)).unwrap();
        let expect =
            &(&q * &q).mul_rat(&crate::scalar::coef::rat(1, 2)) - &(&v * &p);
        assert!(r.equals(&expect));
    }

    #[test]
    fn division_by_vanishing_denominator_detected() {
        let c = charts::m7();
        let w = RatExpr::var(&c, "w").unwrap();
        let e = RatExpr::one(&c).div_ref(&w);
        let r = e.substitute_one("w", &RatExpr::zero(&c));
        assert!(matches!(r, Err(ScalarError::DivisionByZero)));
    }
}

//! Recursive-descent parser for the scalar expression grammar.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := ('-')* base ('^' exponent)?
//! base     := rational | name | '(' expr ')'
//! exponent := rational | name | '(' exponent_expr ')'
//! ```
//!
//! Exponent expressions are evaluated to exact rationals using the supplied
//! parameter bindings (affine combinations like `k-2` or `4*(k-2)/3`, and
//! anything else that folds to a constant). Whitespace is insignificant.
//! Parsing, printing and re-parsing is a fixed point up to normalization.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

use crate::scalar::chart::Chart;
use crate::scalar::coef::{nth_root_exact, Coef, Rat};
use crate::scalar::poly::Exp;
use crate::scalar::ratexpr::RatExpr;
use crate::scalar::ScalarError;

/// Parameter bindings: free names (like `k`) mapped to exact rationals.
pub type Bindings = BTreeMap<String, Rat>;

pub fn bindings(pairs: &[(&str, Rat)]) -> Bindings {
    pairs
        .iter()
        .map(|(n, v)| (n.to_string(), v.clone()))
        .collect()
}

pub struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    chart: &'a Chart,
    bindings: &'a Bindings,
}

/// Parse a scalar expression on a chart with the given parameter bindings.
pub fn parse_scalar(
    text: &str,
    chart: &Chart,
    bindings: &Bindings,
) -> Result<RatExpr, ScalarError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        chart,
        bindings,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn syntax(&self, msg: &str) -> ScalarError {
        ScalarError::Syntax {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expr(&mut self) -> Result<RatExpr, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add_ref(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul_ref(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(ScalarError::DivisionByZero);
                    }
                    acc = acc.div_ref(&d);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatExpr, ScalarError> {
        let mut neg = false;
        while self.eat(b'-') {
            neg = !neg;
        }
        let base = self.base()?;
        let result = if self.eat(b'^') {
            let e = self.exponent()?;
            self.apply_power(base, e)?
        } else {
            self.base_value(base)
        };
        Ok(if neg { result.neg_ref() } else { result })
    }

    fn base_value(&self, base: Base) -> RatExpr {
        match base {
            Base::Var(i) => RatExpr::var_index(self.chart, i),
            Base::Const(c) => RatExpr::from_rat(self.chart, c),
            Base::Expr(x) => x,
        }
    }

    fn apply_power(&self, base: Base, e: Rat) -> Result<RatExpr, ScalarError> {
        let exp = rat_to_exp(&e).ok_or_else(|| {
            ScalarError::Syntax {
                position: self.pos,
                message: format!("exponent {e} out of range"),
            }
        })?;
        match base {
            Base::Var(i) => RatExpr::var_pow(self.chart, i, exp),
            Base::Const(c) => {
                if exp.is_integer() {
                    Ok(RatExpr::from_coef(self.chart, Coef::from_rat(c)).pow_int(exp.to_integer()))
                } else if let Some(root) = nth_root_exact(&c, *exp.denom() as u32) {
                    let mut acc = Rat::from_integer(1.into());
                    for _ in 0..exp.numer().unsigned_abs() {
                        acc *= root.clone();
                    }
                    if exp.is_negative() {
                        acc = acc.recip();
                    }
                    Ok(RatExpr::from_rat(self.chart, acc))
                } else if c == Rat::from_integer(6.into()) && *exp.denom() == 3 {
                    Ok(RatExpr::from_coef(
                        self.chart,
                        Coef::radical_pow(*exp.numer()),
                    ))
                } else {
                    Err(ScalarError::Syntax {
                        position: self.pos,
                        message: format!(
                            "irrational constant {c}^{e}: only exact roots and the adjoined radicals 6^(m/3) are supported"
                        ),
                    })
                }
            }
            Base::Expr(x) => {
                if exp.is_integer() {
                    Ok(x.pow_int(exp.to_integer()))
                } else {
                    Err(ScalarError::Syntax {
                        position: self.pos,
                        message: "fractional power of a parenthesized expression".to_string(),
                    })
                }
            }
        }
    }

    fn base(&mut self) -> Result<Base, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(Base::Expr(e))
            }
            Some(c) if c.is_ascii_digit() => Ok(Base::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.name();
                if let Some(i) = self.chart.index_of(&name) {
                    Ok(Base::Var(i))
                } else if let Some(v) = self.bindings.get(&name) {
                    Ok(Base::Const(v.clone()))
                } else {
                    Err(ScalarError::UnboundParameter(name))
                }
            }
            _ => Err(self.syntax("expected a number, name, or `(`")),
        }
    }

    fn number(&mut self) -> Result<Rat, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let n: BigInt = s.parse().map_err(|_| self.syntax("bad integer"))?;
        Ok(Rat::from_integer(n))
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string()
    }

    /// Exponent: a rational, a bound parameter, or a parenthesized constant
    /// expression over bound parameters and rationals.
    fn exponent(&mut self) -> Result<Rat, ScalarError> {
        let mut neg = false;
        while self.eat(b'-') {
            neg = !neg;
        }
        let v = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.const_expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)` in exponent"));
                }
                v
            }
            // A bare exponent is an integer; fractional exponents are written
            // parenthesized (`q^(5/2)`) so that `q^2/2` means `(q^2)/2`.
            Some(c) if c.is_ascii_digit() => self.number()?,
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.name();
                self.bindings
                    .get(&name)
                    .cloned()
                    .ok_or(ScalarError::UnboundParameter(name))?
            }
            _ => return Err(self.syntax("expected exponent")),
        };
        Ok(if neg { -v } else { v })
    }

    /// Constant expression inside exponent parentheses: +, -, *, / over
    /// rationals and bound parameters, with nesting.
    fn const_expr(&mut self) -> Result<Rat, ScalarError> {
        let mut acc = self.const_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.const_term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= self.const_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn const_term(&mut self) -> Result<Rat, ScalarError> {
        let mut acc = self.const_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.const_factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.const_factor()?;
                    if d.is_zero() {
                        return Err(ScalarError::DivisionByZero);
                    }
                    acc /= d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn const_factor(&mut self) -> Result<Rat, ScalarError> {
        let mut neg = false;
        while self.eat(b'-') {
            neg = !neg;
        }
        let v = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.const_expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                v
            }
            Some(c) if c.is_ascii_digit() => self.number()?,
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.name();
                self.bindings
                    .get(&name)
                    .cloned()
                    .ok_or(ScalarError::UnboundParameter(name))?
            }
            _ => return Err(self.syntax("expected constant factor")),
        };
        Ok(if neg { -v } else { v })
    }
}

enum Base {
    Var(usize),
    Const(Rat),
    Expr(RatExpr),
}

fn rat_to_exp(r: &Rat) -> Option<Exp> {
    use num_traits::ToPrimitive;
    Some(Exp::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::chart::charts;
    use crate::scalar::coef::{rat, rint};

    #[test]
    fn polynomial_example() {
        let c = charts::m5();
        let e = parse_scalar("q^2/2", &c, &Bindings::new()).unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        assert!(e.equals(&(&q * &q).mul_rat(&rat(1, 2))));
    }

    #[test]
    fn bound_parameter_power_law() {
        let c = charts::m5();
        let b = bindings(&[("k", rint(2))]);
        let e = parse_scalar("q^k/(k*(k-1))", &c, &b).unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        assert!(e.equals(&(&q * &q).mul_rat(&rat(1, 2))));
    }

    #[test]
    fn algebraic_identity_is_zero() {
        let c = charts::m5();
        let e = parse_scalar("(x+y)^2 - x^2 - 2*x*y - y^2", &c, &Bindings::new()).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn unbound_parameter_reported() {
        let c = charts::m5();
        let r = parse_scalar("q^k", &c, &Bindings::new());
        assert!(matches!(r, Err(ScalarError::UnboundParameter(ref n)) if n == "k"));
    }

    #[test]
    fn fractional_exponent_guard() {
        let c = charts::m5();
        let r = parse_scalar("x^(1/2)", &c, &Bindings::new());
        assert!(matches!(
            r,
            Err(ScalarError::FractionalExponentOnNonDistinguishedVariable(_))
        ));
        assert!(parse_scalar("q^(1/2)", &c, &Bindings::new()).is_ok());
    }

    #[test]
    fn affine_exponents() {
        let c = charts::m5();
        let b = bindings(&[("k", rat(7, 2))]);
        let e = parse_scalar("q^(4*(k-2)/3)", &c, &b).unwrap();
        // 4*(3/2)/3 = 2
        let q = RatExpr::var(&c, "q").unwrap();
        assert!(e.equals(&(&q * &q)));
    }

    #[test]
    fn radical_constant() {
        let c = charts::a6();
        let b = Bindings::new();
        let e = parse_scalar("6^(1/3) * 6^(2/3)", &c, &b).unwrap();
        assert!(e.equals(&RatExpr::from_int(&c, 6)));
        let r = parse_scalar("27^(1/3)", &c, &b).unwrap();
        assert!(r.equals(&RatExpr::from_int(&c, 3)));
        assert!(parse_scalar("5^(1/3)", &c, &b).is_err());
    }

    #[test]
    fn syntax_error_position() {
        let c = charts::m5();
        match parse_scalar("x + ", &c, &Bindings::new()) {
            Err(ScalarError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn print_parse_fixed_point() {
        let c = charts::m7();
        let b = bindings(&[("k", rat(1, 2))]);
        let texts = [
            "q^(k-1)/(k-1) + w",
            "(w*q - v*p + q^k/k)/(w^4)",
            "-(x+y)^3/(1 - w)",
        ];
        for t in texts {
            let e1 = parse_scalar(t, &c, &b).unwrap();
            let printed = format!("{e1}");
            let e2 = parse_scalar(&printed, &c, &b).unwrap();
            assert!(e1.equals(&e2), "round trip failed for `{t}` -> `{printed}`");
        }
    }
}

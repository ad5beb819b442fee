//! Literal syntax for fixtures: the scalar grammar extended with `d<var>`
//! tokens (coordinate differentials, combined by `*` as symmetric products
//! and `^` as symmetric powers) and `D<var>` tokens (coordinate vector
//! fields). One-forms are homogeneous degree-1 symmetric literals.

use crate::geomcalc::form::DiffForm;
use crate::geomcalc::sym::SymTensor;
use crate::geomcalc::vector::VectorField;
use crate::geomcalc::GeomError;
use crate::scalar::{Bindings, Chart, RatExpr, ScalarError};

#[derive(Clone, Debug)]
enum Lit {
    S(RatExpr),
    T(SymTensor),
    V(VectorField),
}

struct LitParser<'a> {
    text: &'a [u8],
    pos: usize,
    chart: &'a Chart,
    bindings: &'a Bindings,
}

fn syntax(pos: usize, message: &str) -> GeomError {
    GeomError::Scalar(ScalarError::Syntax {
        position: pos,
        message: message.to_string(),
    })
}

impl<'a> LitParser<'a> {
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

    fn expr(&mut self) -> Result<Lit, GeomError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = add(acc, t, self.chart, self.pos)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = neg(self.term()?);
                    acc = add(acc, t, self.chart, self.pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Lit, GeomError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul(acc, f, self.chart, self.pos)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let Lit::S(d) = f else {
                        return Err(syntax(self.pos, "can only divide by a scalar"));
                    };
                    if d.is_zero() {
                        return Err(GeomError::Scalar(ScalarError::DivisionByZero));
                    }
                    acc = match acc {
                        Lit::S(s) => Lit::S(s.div_ref(&d)),
                        Lit::T(t) => Lit::T(t.scale(&d.inv())),
                        Lit::V(v) => Lit::V(v.scale(&d.inv())),
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Lit, GeomError> {
        let mut negate = false;
        while self.eat(b'-') {
            negate = !negate;
        }
        let base = self.base()?;
        let result = if self.eat(b'^') {
            // Powers of differentials are symmetric powers; everything else
            // defers to the scalar grammar via re-parsing of the exponent.
            let expstart = self.pos;
            let e = self.scalar_exponent()?;
            match base {
                Lit::T(t) => {
                    if !e.is_integer() || e < num_rational::Ratio::from_integer(0) {
                        return Err(syntax(expstart, "symmetric powers must be non-negative integers"));
                    }
                    Lit::T(t.pow(e.to_integer() as u32))
                }
                Lit::S(s) => Lit::S(
                    crate::scalar::pow_fractional(&s, e).map_err(GeomError::Scalar)?,
                ),
                Lit::V(_) => return Err(syntax(expstart, "cannot raise a vector field to a power")),
            }
        } else {
            base
        };
        Ok(if negate { neg(result) } else { result })
    }

    fn scalar_exponent(&mut self) -> Result<num_rational::Ratio<i64>, GeomError> {
        // Reuse the scalar parser on the remaining text by delegating to a
        // miniature version: integer, or parenthesized constant expression.
        let start = self.pos;
        let rest = std::str::from_utf8(&self.text[self.pos..]).unwrap();
        // Find the exponent extent: integer or balanced parentheses.
        let bytes = rest.as_bytes();
        let mut idx = 0usize;
        while idx < bytes.len() && bytes[idx].is_ascii_whitespace() {
            idx += 1;
        }
        let extent = if idx < bytes.len() && bytes[idx] == b'(' {
            let mut depth = 0usize;
            let mut end = idx;
            for (o, &b) in bytes[idx..].iter().enumerate() {
                if b == b'(' {
                    depth += 1;
                } else if b == b')' {
                    depth -= 1;
                    if depth == 0 {
                        end = idx + o + 1;
                        break;
                    }
                }
            }
            end
        } else {
            let mut end = idx;
            if end < bytes.len() && bytes[end] == b'-' {
                end += 1;
            }
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            end
        };
        let expr_text = format!("q^{}", &rest[..extent]);
        // Parse `q^<exponent>` against a one-variable fractional chart to
        // recover the exact exponent value.
        let qchart = Chart::new(&["q"], Some("q")).unwrap();
        let parsed = crate::scalar::parse_scalar(&expr_text, &qchart, self.bindings)
            .map_err(GeomError::Scalar)?;
        self.pos += extent;
        // Extract the exponent from the parsed monomial.
        let exp = if parsed.den.is_constant() {
            parsed.num.leading().map(|(m, _)| m.0[0])
        } else {
            parsed.den.leading().map(|(m, _)| -m.0[0])
        };
        exp.ok_or_else(|| syntax(start, "bad exponent"))
    }

    fn base(&mut self) -> Result<Lit, GeomError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                // Delegate a numeric literal (possibly with a radical power)
                // to the scalar parser.
                self.scalar_atom()
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.name();
                // d<var>: coordinate differential; D<var>: coordinate field.
                if let Some(var) = name.strip_prefix('d') {
                    if self.chart.index_of(var).is_some() {
                        return Ok(Lit::T(SymTensor::d_var(self.chart, var)?));
                    }
                }
                if let Some(var) = name.strip_prefix('D') {
                    if self.chart.index_of(var).is_some() {
                        return Ok(Lit::V(VectorField::partial(self.chart, var)?));
                    }
                }
                if self.chart.index_of(&name).is_some() {
                    return Ok(Lit::S(RatExpr::var(self.chart, &name).unwrap()));
                }
                if let Some(v) = self.bindings.get(&name) {
                    return Ok(Lit::S(RatExpr::from_rat(self.chart, v.clone())));
                }
                Err(GeomError::Scalar(ScalarError::UnboundParameter(name)))
            }
            _ => Err(syntax(self.pos, "expected a literal")),
        }
    }

    fn scalar_atom(&mut self) -> Result<Lit, GeomError> {
        // Number, possibly followed by ^exponent handled by factor(); parse
        // digits here.
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        let n: num_bigint::BigInt = s
            .parse()
            .map_err(|_| syntax(start, "bad integer"))?;
        // Peek a radical power 6^(m/3) or exact-root constant: delegate.
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let save = self.pos;
            let e = self.scalar_exponent()?;
            let text = if e.is_integer() {
                format!("{n}^{}", e.numer())
            } else {
                format!("{n}^({}/{})", e.numer(), e.denom())
            };
            let parsed = crate::scalar::parse_scalar(&text, self.chart, self.bindings)
                .map_err(|err| match err {
                    ScalarError::Syntax { message, .. } => syntax(save, &message),
                    other => GeomError::Scalar(other),
                })?;
            return Ok(Lit::S(parsed));
        }
        Ok(Lit::S(RatExpr::from_rat(
            self.chart,
            crate::scalar::Rat::from_integer(n),
        )))
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
}

fn neg(l: Lit) -> Lit {
    match l {
        Lit::S(s) => Lit::S(s.neg_ref()),
        Lit::T(t) => Lit::T(t.neg()),
        Lit::V(v) => Lit::V(v.neg()),
    }
}

fn add(a: Lit, b: Lit, chart: &Chart, pos: usize) -> Result<Lit, GeomError> {
    match (a, b) {
        (Lit::S(x), Lit::S(y)) => Ok(Lit::S(x.add_ref(&y))),
        (Lit::T(x), Lit::T(y)) => Ok(Lit::T(x.add(&y))),
        (Lit::V(x), Lit::V(y)) => Ok(Lit::V(x.add(&y))),
        // Scalars promote to degree-0 tensors when mixed with tensors.
        (Lit::S(x), Lit::T(y)) => Ok(Lit::T(SymTensor::scalar(chart, x).add(&y))),
        (Lit::T(x), Lit::S(y)) => Ok(Lit::T(x.add(&SymTensor::scalar(chart, y)))),
        _ => Err(syntax(pos, "cannot add values of different kinds")),
    }
}

fn mul(a: Lit, b: Lit, _chart: &Chart, pos: usize) -> Result<Lit, GeomError> {
    match (a, b) {
        (Lit::S(x), Lit::S(y)) => Ok(Lit::S(x.mul_ref(&y))),
        (Lit::S(x), Lit::T(y)) | (Lit::T(y), Lit::S(x)) => Ok(Lit::T(y.scale(&x))),
        (Lit::S(x), Lit::V(y)) | (Lit::V(y), Lit::S(x)) => Ok(Lit::V(y.scale(&x))),
        (Lit::T(x), Lit::T(y)) => Ok(Lit::T(x.mul(&y)?)),
        _ => Err(syntax(pos, "cannot multiply these kinds")),
    }
}

fn parse_lit(text: &str, chart: &Chart, bindings: &Bindings) -> Result<Lit, GeomError> {
    let mut p = LitParser {
        text: text.as_bytes(),
        pos: 0,
        chart,
        bindings,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(syntax(p.pos, "trailing input"));
    }
    Ok(v)
}

/// Parse a symmetric-tensor literal.
pub fn parse_sym_tensor(
    text: &str,
    chart: &Chart,
    bindings: &Bindings,
) -> Result<SymTensor, GeomError> {
    match parse_lit(text, chart, bindings)? {
        Lit::T(t) => Ok(t),
        Lit::S(s) => Ok(SymTensor::scalar(chart, s)),
        Lit::V(_) => Err(syntax(0, "expected a tensor, found a vector field")),
    }
}

/// Parse a 1-form literal (a homogeneous degree-1 tensor).
pub fn parse_one_form(
    text: &str,
    chart: &Chart,
    bindings: &Bindings,
) -> Result<DiffForm, GeomError> {
    let t = parse_sym_tensor(text, chart, bindings)?;
    if t.degree() != Some(1) && !t.is_zero() {
        return Err(syntax(0, "expected a 1-form literal"));
    }
    let mut out = DiffForm::zero(chart, 1);
    for (mono, c) in &t.terms {
        let i = mono.iter().position(|&e| e == 1).unwrap();
        out.insert_add(1 << i, c.clone());
    }
    Ok(out)
}

/// Parse a vector-field literal.
pub fn parse_vector_field(
    text: &str,
    chart: &Chart,
    bindings: &Bindings,
) -> Result<VectorField, GeomError> {
    match parse_lit(text, chart, bindings)? {
        Lit::V(v) => Ok(v),
        _ => Err(syntax(0, "expected a vector field literal")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{bindings, charts, rint};

    #[test]
    fn parses_contact_form() {
        let c = charts::m7();
        let b = bindings(&[("k", rint(2))]);
        let lam = parse_one_form(
            "dz - (w + q^(k-1)/(k-1))*dp + v*dy + (w*q - v*p + q^k/k)*dx",
            &c,
            &b,
        )
        .unwrap();
        assert_eq!(lam.degree, 1);
        assert!(lam
            .coeff_of("p")
            .equals(&crate::scalar::parse_scalar("-(w+q)", &c, &b).unwrap()));
        assert!(lam.coeff_of("z").is_one());
    }

    #[test]
    fn parses_symmetric_tensor() {
        let c = charts::a5();
        let t = parse_sym_tensor(
            "-3*dx2^2*dx3^2 + 4*dx1*dx3^3 + 4*dx2^3*dx4 - 6*dx1*dx2*dx3*dx4 + dx1^2*dx4^2",
            &c,
            &Bindings::new(),
        )
        .unwrap();
        assert_eq!(t.degree(), Some(4));
        assert_eq!(t.terms.len(), 5);
    }

    #[test]
    fn parses_vector_field() {
        let c = charts::m5();
        let b = bindings(&[("k", rint(3))]);
        let v = parse_vector_field(
            "q^(k-1)*Dx + (p*q^(k-1) + (1-k)*z)*Dy + ((k-1)/k)*q^k*Dp + q^(2*k-1)/(k*(2*k-1))*Dz",
            &c,
            &b,
        )
        .unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        assert!(v.comps[c.index_of("x").unwrap()].equals(&q.pow_int(2)));
        assert!(v.comps[c.index_of("y").unwrap()]
            .equals(&crate::scalar::parse_scalar("p*q^2 - 2*z", &c, &b).unwrap()));
    }

    #[test]
    fn radicals_in_literals() {
        let c = charts::a6();
        let t = parse_sym_tensor("6^(2/3)/2 * dx3", &c, &Bindings::new()).unwrap();
        assert_eq!(t.degree(), Some(1));
    }
}

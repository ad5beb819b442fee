//! Coefficient field for all scalar arithmetic: the cubic extension ℚ(6^{1/3}).
//!
//! Every coefficient is `c0 + c1·r + c2·r²` with rational `ci` and `r³ = 6`.
//! Plain rationals are the `c1 = c2 = 0` case, which is what almost all of the
//! toolkit produces; the radical components only appear through the adapted
//! coordinate changes that mention the constants 6^{1/3} and 6^{2/3}.
//! Since x³ − 6 is irreducible over ℚ this is a field, and since 6^{1/3} is a
//! real number the field is ordered; signs are decided exactly by interval
//! refinement of the real root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational number (arbitrary precision).
pub type Rat = BigRational;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// An element of ℚ(6^{1/3}), stored on the basis (1, 6^{1/3}, 6^{2/3}).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coef {
    pub c: [Rat; 3],
}

impl Coef {
    pub fn zero() -> Self {
        Coef {
            c: [Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Coef {
            c: [Rat::one(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Coef {
            c: [r, Rat::zero(), Rat::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rint(n))
    }

    /// 6^{m/3} for any integer m (negative allowed).
    pub fn radical_pow(m: i64) -> Self {
        let q = m.div_euclid(3);
        let r = m.rem_euclid(3) as usize;
        let six = rint(6);
        let mut scale = Rat::one();
        if q >= 0 {
            for _ in 0..q {
                scale *= six.clone();
            }
        } else {
            for _ in 0..(-q) {
                scale /= six.clone();
            }
        }
        let mut c = [Rat::zero(), Rat::zero(), Rat::zero()];
        c[r] = scale;
        Coef { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero()
    }

    /// Is this a plain rational (no radical part)?
    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// Multiplicative inverse. Panics on zero (a structural bug upstream).
    pub fn inv(&self) -> Coef {
        assert!(!self.is_zero(), "division by zero coefficient");
        if self.is_rational() {
            return Coef::from_rat(self.c[0].recip());
        }
        // Solve (a + b r + c r²)(x + y r + z r²) = 1 with r³ = 6:
        //   a x + 6 c y + 6 b z = 1
        //   b x +  a y + 6 c z = 0
        //   c x +  b y +  a z = 0
        let (a, b, c) = (&self.c[0], &self.c[1], &self.c[2]);
        let six = rint(6);
        let m = [
            [a.clone(), six.clone() * c, six.clone() * b],
            [b.clone(), a.clone(), six.clone() * c],
            [c.clone(), b.clone(), a.clone()],
        ];
        let det = |m: &[[Rat; 3]; 3]| -> Rat {
            m[0][0].clone() * (m[1][1].clone() * &m[2][2] - m[1][2].clone() * &m[2][1])
                - m[0][1].clone() * (m[1][0].clone() * &m[2][2] - m[1][2].clone() * &m[2][0])
                + m[0][2].clone() * (m[1][0].clone() * &m[2][1] - m[1][1].clone() * &m[2][0])
        };
        let d = det(&m);
        assert!(!d.is_zero(), "x^3 - 6 is irreducible, so this cannot happen");
        // Cramer's rule for rhs (1,0,0).
        let minor = |col: usize| -> Rat {
            let mut mm = m.clone();
            for (row, mm_row) in mm.iter_mut().enumerate() {
                mm_row[col] = if row == 0 { Rat::one() } else { Rat::zero() };
            }
            det(&mm)
        };
        Coef {
            c: [minor(0) / &d, minor(1) / &d, minor(2) / &d],
        }
    }

    /// Exact sign of the real number c0 + c1·6^{1/3} + c2·6^{2/3}.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return if self.c[0].is_positive() { 1 } else { -1 };
        }
        // Refine a rational enclosure [lo, hi] of 6^{1/3} until the sign of
        // the evaluated polynomial is decided. Nonzero field elements keep a
        // definite sign, so this terminates.
        let mut lo = rint(1);
        let mut hi = rint(2);
        let eval = |r: &Rat| -> Rat {
            self.c[0].clone() + self.c[1].clone() * r + self.c[2].clone() * r * r
        };
        for _ in 0..256 {
            // Interval bounds for c0 + c1 r + c2 r²; r > 0 throughout.
            let candidates = [eval(&lo), eval(&hi)];
            // The expression is monotone piecewise, but rather than analyze it,
            // bound it crudely: evaluate with each coefficient paired to the
            // endpoint that extremizes its term.
            let term_bounds = |maximize: bool| -> Rat {
                let pick = |coef: &Rat, lo_v: Rat, hi_v: Rat| -> Rat {
                    if coef.is_positive() == maximize {
                        coef.clone() * hi_v
                    } else {
                        coef.clone() * lo_v
                    }
                };
                self.c[0].clone()
                    + pick(&self.c[1], lo.clone(), hi.clone())
                    + pick(&self.c[2], lo.clone() * &lo, hi.clone() * &hi)
            };
            let upper = term_bounds(true);
            let lower = term_bounds(false);
            if lower.is_positive() {
                return 1;
            }
            if upper.is_negative() {
                return -1;
            }
            let _ = candidates;
            let mid = (lo.clone() + &hi) / rint(2);
            if mid.clone() * &mid * &mid < rint(6) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        unreachable!("sign of a nonzero element of Q(6^(1/3)) is decidable");
    }

    /// c^e for positive integral e.
    pub fn pow(&self, e: u32) -> Coef {
        let mut acc = Coef::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Coef {
    type Output = Coef;
    fn add(self, rhs: &Coef) -> Coef {
        Coef {
            c: [
                self.c[0].clone() + &rhs.c[0],
                self.c[1].clone() + &rhs.c[1],
                self.c[2].clone() + &rhs.c[2],
            ],
        }
    }
}

impl Sub for &Coef {
    type Output = Coef;
    fn sub(self, rhs: &Coef) -> Coef {
        Coef {
            c: [
                self.c[0].clone() - &rhs.c[0],
                self.c[1].clone() - &rhs.c[1],
                self.c[2].clone() - &rhs.c[2],
            ],
        }
    }
}

impl Mul for &Coef {
    type Output = Coef;
    fn mul(self, rhs: &Coef) -> Coef {
        // (a0 + a1 r + a2 r²)(b0 + b1 r + b2 r²), r³ = 6.
        let a = &self.c;
        let b = &rhs.c;
        let six = rint(6);
        let c0 = a[0].clone() * &b[0] + six.clone() * (a[1].clone() * &b[2] + a[2].clone() * &b[1]);
        let c1 = a[0].clone() * &b[1] + a[1].clone() * &b[0] + six.clone() * a[2].clone() * &b[2];
        let c2 = a[0].clone() * &b[2] + a[1].clone() * &b[1] + a[2].clone() * &b[0];
        Coef { c: [c0, c1, c2] }
    }
}

impl Div for &Coef {
    type Output = Coef;
    fn div(self, rhs: &Coef) -> Coef {
        self * &rhs.inv()
    }
}

impl Neg for &Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        Coef {
            c: [
                -self.c[0].clone(),
                -self.c[1].clone(),
                -self.c[2].clone(),
            ],
        }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coef {
    /// Prints for re-parsing: `a`, `a/b`, or a sum with `6^(1/3)` / `6^(2/3)` factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rat(&self.c[0]));
        }
        let mut parts: Vec<String> = Vec::new();
        if !self.c[0].is_zero() {
            parts.push(fmt_rat(&self.c[0]));
        }
        for (i, tag) in [(1usize, "6^(1/3)"), (2usize, "6^(2/3)")] {
            if !self.c[i].is_zero() {
                if self.c[i].is_one() {
                    parts.push(tag.to_string());
                } else {
                    parts.push(format!("{}*{}", fmt_rat(&self.c[i]), tag));
                }
            }
        }
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                if let Some(stripped) = p.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(stripped);
                    continue;
                } else {
                    s.push_str(" + ");
                }
            }
            s.push_str(p);
        }
        write!(f, "({s})")
    }
}

impl fmt::Debug for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Exact d-th root of a rational, if one exists.
pub fn nth_root_exact(x: &Rat, d: u32) -> Option<Rat> {
    if d == 0 {
        return None;
    }
    if d == 1 {
        return Some(x.clone());
    }
    if x.is_negative() && d % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let neg = n.is_negative();
        let m = n.abs();
        let r = m.nth_root(d);
        if num_traits::pow::pow(r.clone(), d as usize) == m {
            Some(if neg { -r } else { r })
        } else {
            None
        }
    };
    let rn = root_int(x.numer())?;
    let rd = root_int(x.denom())?;
    Some(Rat::new(rn, rd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_rewrite_rules() {
        let r = Coef::radical_pow(1);
        let r2 = Coef::radical_pow(2);
        assert_eq!(&r * &r, r2);
        assert_eq!(&(&r * &r) * &r, Coef::from_int(6));
        assert_eq!(&r * &r2, Coef::from_int(6));
    }

    #[test]
    fn inverse_in_cubic_field() {
        let x = &(&Coef::from_int(2) + &Coef::radical_pow(1)) - &Coef::radical_pow(2);
        let inv = x.inv();
        assert!((&x * &inv).is_one());
    }

    #[test]
    fn exact_signs() {
        // 6^(1/3) ≈ 1.817
        assert_eq!(Coef::radical_pow(1).sign(), 1);
        let x = &Coef::radical_pow(1) - &Coef::from_rat(rat(9, 5)); // 1.817 - 1.8 > 0
        assert_eq!(x.sign(), 1);
        let y = &Coef::radical_pow(1) - &Coef::from_rat(rat(11, 6)); // 1.817 - 1.833 < 0
        assert_eq!(y.sign(), -1);
        assert_eq!(Coef::zero().sign(), 0);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(nth_root_exact(&rat(27, 8), 3), Some(rat(3, 2)));
        assert_eq!(nth_root_exact(&rat(2, 1), 2), None);
        assert_eq!(nth_root_exact(&rat(-8, 1), 3), Some(rint(-2)));
    }
}

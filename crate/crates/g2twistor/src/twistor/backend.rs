//! The exact scalar backend for the power-law distributions: h = q^k/(k(k−1))
//! with rational k ∉ {0, 1}, so that every derivative and every rational
//! power of h'' is a pure q-power with rational coefficient.

use num_traits::{One, Zero};

use crate::geomcalc::{span_growth, VectorField};
use crate::scalar::{bindings, charts, exp_int, Bindings, Chart, Exp, Rat, RatExpr};
use crate::twistor::TwistorError;

#[derive(Clone, Debug)]
pub struct PowerLawBackend {
    pub k: Rat,
}

impl PowerLawBackend {
    pub fn new(k: &Rat) -> Result<Self, TwistorError> {
        if k.is_zero() || k.is_one() {
            return Err(TwistorError::DegenerateParameter(format!(
                "k = {k} does not give a (2,3,5)-distribution"
            )));
        }
        Ok(PowerLawBackend { k: k.clone() })
    }

    pub fn bindings(&self) -> Bindings {
        bindings(&[("k", self.k.clone())])
    }

    fn k_exp(&self) -> Exp {
        use num_traits::ToPrimitive;
        Exp::new(
            self.k.numer().to_i64().expect("k fits machine integers"),
            self.k.denom().to_i64().expect("k fits machine integers"),
        )
    }

    /// h⁽ⁿ⁾ on the given chart: (∏_{j<n}(k−j))/(k(k−1)) · q^{k−n}.
    pub fn h_derivative(&self, chart: &Chart, n: u32) -> RatExpr {
        let qi = chart.index_of("q").expect("chart carries q");
        let mut coeff = Rat::one() / (self.k.clone() * (self.k.clone() - Rat::one()));
        for j in 0..n {
            coeff *= self.k.clone() - Rat::from_integer(j.into());
        }
        if coeff.is_zero() {
            return RatExpr::zero(chart);
        }
        let e = self.k_exp() - exp_int(n as i64);
        RatExpr::var_pow(chart, qi, e)
            .expect("q is the fractional variable")
            .mul_rat(&coeff)
    }

    /// h''^{m/3} = q^{(k−2)m/3} (single-valued on the domain q > 0).
    pub fn hpp_pow_third(&self, chart: &Chart, m: i64) -> RatExpr {
        let qi = chart.index_of("q").expect("chart carries q");
        let e = (self.k_exp() - exp_int(2)) * Exp::new(m, 3);
        RatExpr::var_pow(chart, qi, e).expect("q is the fractional variable")
    }

    /// The two distribution generators ξ₁ = ∂x + p∂y + q∂p + h∂z and ξ₂ = ∂q
    /// on the base chart.
    pub fn distribution(&self) -> (VectorField, VectorField) {
        let c = charts::m5();
        let p = RatExpr::var(&c, "p").unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        let h = self.h_derivative(&c, 0);
        let xi1 = VectorField::partial(&c, "x")
            .unwrap()
            .add(&VectorField::partial(&c, "y").unwrap().scale(&p))
            .add(&VectorField::partial(&c, "p").unwrap().scale(&q))
            .add(&VectorField::partial(&c, "z").unwrap().scale(&h));
        let xi2 = VectorField::partial(&c, "q").unwrap();
        (xi1, xi2)
    }

    /// The tautological line field ξ(v,w) = ξ₁ + (v/h″)∂q + (w/h″)(∂p + h′∂z)
    /// on the twistor chart.
    pub fn line_field(&self) -> VectorField {
        let c = charts::m7();
        let p = RatExpr::var(&c, "p").unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        let v = RatExpr::var(&c, "v").unwrap();
        let w = RatExpr::var(&c, "w").unwrap();
        let h = self.h_derivative(&c, 0);
        let hp = self.h_derivative(&c, 1);
        let hpp_inv = self.h_derivative(&c, 2).inv();
        VectorField::partial(&c, "x")
            .unwrap()
            .add(&VectorField::partial(&c, "y").unwrap().scale(&p))
            .add(&VectorField::partial(&c, "p").unwrap().scale(&q))
            .add(&VectorField::partial(&c, "z").unwrap().scale(&h))
            .add(
                &VectorField::partial(&c, "q")
                    .unwrap()
                    .scale(&v.mul_ref(&hpp_inv)),
            )
            .add(
                &VectorField::partial(&c, "p")
                    .unwrap()
                    .add(&VectorField::partial(&c, "z").unwrap().scale(&hp))
                    .scale(&w.mul_ref(&hpp_inv)),
            )
    }

    /// The prolongation S = span(ξ(v,w), ∂v, ∂w) on the twistor chart.
    pub fn prolongation_distribution(&self) -> Vec<VectorField> {
        let c = charts::m7();
        vec![
            self.line_field(),
            VectorField::partial(&c, "v").unwrap(),
            VectorField::partial(&c, "w").unwrap(),
        ]
    }
}

/// Build the distribution D_k and assert its growth vector is (2,3,5).
pub fn build_distribution(k: &Rat) -> Result<(VectorField, VectorField, Vec<usize>), TwistorError> {
    let backend = PowerLawBackend::new(k)?;
    let (xi1, xi2) = backend.distribution();
    let growth = span_growth(&[xi1.clone(), xi2.clone()], 3)?;
    if growth != vec![2, 3, 5] {
        return Err(TwistorError::DegenerateParameter(format!(
            "growth vector is {growth:?}, not (2,3,5)"
        )));
    }
    Ok((xi1, xi2, growth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    #[test]
    fn h_derivatives_are_pure_powers() {
        let c = charts::m5();
        let b = PowerLawBackend::new(&rint(3)).unwrap();
        // k = 3: h'' = q.
        assert!(b.h_derivative(&c, 2).equals(&RatExpr::var(&c, "q").unwrap()));
        // k = 2: h = q²/2, h'' = 1, h''' = 0.
        let b2 = PowerLawBackend::new(&rint(2)).unwrap();
        let q = RatExpr::var(&c, "q").unwrap();
        assert!(b2
            .h_derivative(&c, 0)
            .equals(&q.pow_int(2).mul_rat(&rat(1, 2))));
        assert!(b2.h_derivative(&c, 2).is_one());
        assert!(b2.h_derivative(&c, 3).is_zero());
    }

    #[test]
    fn growth_vectors() {
        for k in [rint(2), rint(3), rat(1, 2)] {
            let (_x1, _x2, g) = build_distribution(&k).unwrap();
            assert_eq!(g, vec![2, 3, 5], "k = {k}");
        }
        assert!(build_distribution(&rint(1)).is_err());
        assert!(build_distribution(&rint(0)).is_err());
    }

    #[test]
    fn prolongation_growth_is_357() {
        for k in [rint(3), rint(2)] {
            let b = PowerLawBackend::new(&k).unwrap();
            let s = b.prolongation_distribution();
            let g = span_growth(&s, 3).unwrap();
            assert_eq!(g, vec![3, 5, 7], "k = {k}");
        }
    }
}

//! Lie contact data on the twistor space: the contact form λ, the symplectic
//! class ρ, the symmetric rank-4 tensor Υ, and the degenerate metric g, all
//! assembled from the θ-coframe with exact cross-checks.

use crate::geomcalc::{DiffForm, SymTensor};
use crate::scalar::{charts, Rat, RatExpr};
use crate::twistor::coframe::{build_theta_coframe, CoframeFamily};
use crate::twistor::fixtures::fixtures;
use crate::twistor::TwistorError;

pub struct LieContactData {
    pub coframe: CoframeFamily,
    pub lambda: DiffForm,
    pub rho: DiffForm,
    pub upsilon: SymTensor,
    pub metric: SymTensor,
}

pub fn build_contact_data(k: &Rat) -> Result<LieContactData, TwistorError> {
    let coframe = build_theta_coframe(k)?;
    build_contact_data_from(coframe)
}

pub fn build_contact_data_from(coframe: CoframeFamily) -> Result<LieContactData, TwistorError> {
    let c = charts::m7();
    let b = coframe.backend.bindings();
    let f = fixtures();
    let lambda = f.one_form("lambda", &b)?;

    // λ is θ⁰ rescaled to unit dz coefficient.
    let dz_coeff = coframe.theta[0].coeff_of("z");
    if dz_coeff.is_zero() {
        return Err(TwistorError::TranscriptionSelfCheckFailed(
            "theta0 has no dz component".to_string(),
        ));
    }
    let rescaled = coframe.theta[0].scale(&dz_coeff.inv());
    if !rescaled.sub(&lambda).is_zero() {
        return Err(TwistorError::CrossCheckFailed(
            "theta0 rescaled to unit dz does not equal lambda".to_string(),
        ));
    }

    // ρ = 3θ¹∧θ⁶ + 3θ²∧θ⁵ + θ³∧θ⁴.
    let t = &coframe.theta;
    let three = RatExpr::from_int(&c, 3);
    let rho = t[1]
        .wedge(&t[6])?
        .scale(&three)
        .add(&t[2].wedge(&t[5])?.scale(&three))
        .add(&t[3].wedge(&t[4])?);

    // Υ = 2θ²(θ³)²θ⁶ − 3(θ¹)²(θ⁶)² − 2θ¹θ³θ⁴θ⁶ − 6θ¹θ²θ⁵θ⁶
    //     + 2θ²θ³θ⁴θ⁵ − 2θ¹(θ⁴)²θ⁵ − 3(θ²)²(θ⁵)².
    let s: Vec<SymTensor> = t.iter().map(SymTensor::from_one_form).collect();
    let prod = |idx: &[usize]| -> Result<SymTensor, TwistorError> {
        let mut acc = s[idx[0]].clone();
        for &i in &idx[1..] {
            acc = acc.mul(&s[i])?;
        }
        Ok(acc)
    };
    let cst = |n: i64| RatExpr::from_int(&c, n);
    let upsilon = prod(&[2, 3, 3, 6])?
        .scale(&cst(2))
        .add(&prod(&[1, 1, 6, 6])?.scale(&cst(-3)))
        .add(&prod(&[1, 3, 4, 6])?.scale(&cst(-2)))
        .add(&prod(&[1, 2, 5, 6])?.scale(&cst(-6)))
        .add(&prod(&[2, 3, 4, 5])?.scale(&cst(2)))
        .add(&prod(&[1, 4, 4, 5])?.scale(&cst(-2)))
        .add(&prod(&[2, 2, 5, 5])?.scale(&cst(-3)));

    // g = (4/3)(θ⁰)² + 2θ¹θ⁴ − 2θ²θ³.
    let metric = s[0]
        .pow(2)
        .scale(&RatExpr::from_rat(&c, crate::scalar::rat(4, 3)))
        .add(&s[1].mul(&s[4])?.scale(&cst(2)))
        .add(&s[2].mul(&s[3])?.scale(&cst(-2)));

    let data = LieContactData {
        coframe,
        lambda,
        rho,
        upsilon,
        metric,
    };
    data.cross_checks()?;
    Ok(data)
}

impl LieContactData {
    pub fn k(&self) -> &Rat {
        self.coframe.k()
    }

    fn cross_checks(&self) -> Result<(), TwistorError> {
        let c = charts::m7();
        // Contact volume: dλ ∧ dλ ∧ dλ ∧ λ = −6w · (sorted top form).
        let dl = self.lambda.d();
        let vol = dl
            .wedge(&dl)?
            .wedge(&dl)?
            .wedge(&self.lambda)?;
        let top_mask: u16 = (1 << 7) - 1;
        let coeff = vol
            .terms
            .get(&top_mask)
            .cloned()
            .unwrap_or_else(|| RatExpr::zero(&c));
        let expected = RatExpr::var(&c, "w").unwrap().mul_rat(&crate::scalar::rint(-6));
        if !coeff.equals(&expected) {
            return Err(TwistorError::CrossCheckFailed(format!(
                "contact volume coefficient is {coeff}, expected -6w"
            )));
        }
        // The metric is semibasic.
        if self.metric.uses_vars(&["v", "w"]) {
            return Err(TwistorError::CrossCheckFailed(
                "g has dv or dw components".to_string(),
            ));
        }
        // The distribution is totally null for g.
        let (xi1, xi2) = self.coframe.backend.distribution();
        let xi1 = xi1.extend_to(&c)?;
        let xi2 = xi2.extend_to(&c)?;
        for (name, a, b) in [
            ("g(xi1,xi1)", &xi1, &xi1),
            ("g(xi1,xi2)", &xi1, &xi2),
            ("g(xi2,xi2)", &xi2, &xi2),
        ] {
            let val = self.metric.eval2(a, b)?;
            if !val.is_zero() {
                return Err(TwistorError::CrossCheckFailed(format!("{name} = {val} ≠ 0")));
            }
        }
        // g is a scalar multiple of the printed conformal representative.
        let printed = fixtures().sym_tensor("metric_example", &self.coframe.backend.bindings())?;
        let lifted = lift_to_m7(&printed)?;
        if self.metric.multiple_of(&lifted).is_none() {
            return Err(TwistorError::CrossCheckFailed(
                "g is not a scalar multiple of the printed conformal metric".to_string(),
            ));
        }
        // ρ restricted to ker λ agrees with dθ⁰ restricted to ker λ up to
        // exact scale.
        let dtheta0 = self.coframe.theta[0].d();
        let restrict = |form: &DiffForm| -> Result<DiffForm, TwistorError> {
            // On ker λ: dz = dz − λ (unit dz coefficient).
            let repl = DiffForm::d_var(&c, "z")?.sub(&self.lambda);
            Ok(form.eliminate("z", &repl)?)
        };
        let r_rho = restrict(&self.rho)?;
        let r_dt = restrict(&dtheta0)?;
        if r_rho.multiple_of(&r_dt).is_none() {
            return Err(TwistorError::CrossCheckFailed(
                "rho and d(theta0) differ on ker lambda".to_string(),
            ));
        }
        Ok(())
    }

    /// The conformal factor between g and the printed metric (v,w-dependent).
    pub fn metric_factor(&self) -> Result<RatExpr, TwistorError> {
        let printed = fixtures().sym_tensor("metric_example", &self.coframe.backend.bindings())?;
        let lifted = lift_to_m7(&printed)?;
        self.metric.multiple_of(&lifted).ok_or_else(|| {
            TwistorError::CrossCheckFailed("metric proportionality lost".to_string())
        })
    }
}

/// Interpret a symmetric tensor on the base chart as a tensor on the twistor
/// chart (same coordinate expressions, no fiber components).
pub fn lift_to_m7(t: &SymTensor) -> Result<SymTensor, TwistorError> {
    let m5 = charts::m5();
    let m7 = charts::m7();
    assert!(t.chart == m5);
    let assignment: Vec<RatExpr> = m5
        .vars()
        .iter()
        .map(|v| RatExpr::var(&m7, v).unwrap())
        .collect();
    let mut out = SymTensor::zero(&m7);
    for (mono, c) in &t.terms {
        let mut m7mono = vec![0u8; 7];
        m7mono[..5].copy_from_slice(mono);
        let coeff = c
            .substitute(&m7, &assignment)
            .map_err(crate::geomcalc::GeomError::Scalar)?;
        out.insert_add(m7mono, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    #[test]
    fn contact_data_builds_for_k2() {
        let data = build_contact_data(&rint(2)).unwrap();
        // The assembled Υ agrees with the printed flat representative up to
        // scale modulo λ.
        let printed = fixtures()
            .sym_tensor("upsilon2_printed", &data.coframe.backend.bindings())
            .unwrap();
        match crate::geomcalc::proportional_mod(&data.upsilon, &printed, &data.lambda, "z").unwrap()
        {
            crate::geomcalc::PropMod::Yes { factor } => assert!(!factor.is_zero()),
            crate::geomcalc::PropMod::No { certificate } => {
                panic!("assembled and printed Upsilon disagree at {certificate:?}")
            }
        }
    }

    #[test]
    fn contact_data_builds_for_k3_and_khalf() {
        for k in [rint(3), rat(1, 2)] {
            let data = build_contact_data(&k).unwrap();
            let f = data.metric_factor().unwrap();
            assert!(!f.is_zero());
        }
    }
}

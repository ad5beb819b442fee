//! The boundary reduction at w = 0 for the flat case k = 2: restriction of
//! the contact pair to the 6-dimensional boundary, the Cauchy characteristic,
//! the adapted coordinate change (which adjoins the radicals 6^{1/3} and
//! 6^{2/3}), and the exact match with the flat boundary pair.

use crate::geomcalc::{ChartMap, DiffForm, PropMod, SymTensor, VectorField};
use crate::scalar::{charts, parse_scalar, rint, Bindings, RatExpr};
use crate::twistor::contact::build_contact_data;
use crate::twistor::fixtures::fixtures;
use crate::twistor::TwistorError;

pub struct BoundaryData {
    /// ι*λ on the boundary chart (x, y, p, q, z, v).
    pub lambda0: DiffForm,
    /// ι*Υ on the boundary chart.
    pub upsilon0: SymTensor,
    /// The Cauchy characteristic X = ∂x + p∂y + q∂p + (q²/2)∂z + v∂q.
    pub cauchy: VectorField,
    /// λ₀ in the adapted coordinates, descended to (x0..x4).
    pub lambda0_adapted: DiffForm,
    /// Υ₀ in the adapted coordinates, descended to (x0..x4).
    pub upsilon0_adapted: SymTensor,
    /// The exact constant relating the adapted tensor to the flat-model
    /// representative.
    pub upsilon_factor: RatExpr,
}

pub fn boundary_reduction() -> Result<BoundaryData, TwistorError> {
    let k = rint(2);
    let data = build_contact_data(&k)?;
    let b = data.coframe.backend.bindings();
    let f = fixtures();

    // The assembled Υ has w-poles; the printed polynomial representative of
    // the same class (cross-checked against the assembly modulo λ) restricts
    // to the boundary.
    let printed = f.sym_tensor("upsilon2_printed", &b)?;
    match crate::geomcalc::proportional_mod(&data.upsilon, &printed, &data.lambda, "z")? {
        PropMod::Yes { .. } => {}
        PropMod::No { certificate } => {
            return Err(TwistorError::CrossCheckFailed(format!(
                "printed flat Upsilon does not represent the assembled class: {certificate:?}"
            )))
        }
    }

    // ι: (x,y,p,q,z,v) ↪ (x,y,p,q,z,v,w=0).
    let b6 = charts::b6();
    let m7 = charts::m7();
    let mut assignment: Vec<RatExpr> = b6
        .vars()
        .iter()
        .map(|v| RatExpr::var(&b6, v).unwrap())
        .collect();
    assignment.push(RatExpr::zero(&b6));
    let incl = ChartMap::new(&b6, &m7, assignment);

    let lambda0 = incl.pullback_form(&data.lambda)?;
    let expected =
        crate::geomcalc::parse_one_form("dz - q*dp + v*dy + (q^2/2 - v*p)*dx", &b6, &Bindings::new())?;
    if let Some(bad) = first_coeff_mismatch_form(&lambda0, &expected) {
        return Err(TwistorError::MatchFailed(format!(
            "iota*lambda differs from the printed boundary contact form at d{bad}"
        )));
    }
    let upsilon0 = incl.pullback_sym(&printed)?;

    // Cauchy characteristic checks.
    let cauchy = {
        let p = RatExpr::var(&b6, "p").unwrap();
        let q = RatExpr::var(&b6, "q").unwrap();
        let v = RatExpr::var(&b6, "v").unwrap();
        VectorField::partial(&b6, "x")?
            .add(&VectorField::partial(&b6, "y")?.scale(&p))
            .add(&VectorField::partial(&b6, "p")?.scale(&q))
            .add(
                &VectorField::partial(&b6, "z")?
                    .scale(&q.pow_int(2).mul_rat(&crate::scalar::rat(1, 2))),
            )
            .add(&VectorField::partial(&b6, "q")?.scale(&v))
    };
    if !lambda0.interior(&cauchy)?.is_zero() {
        return Err(TwistorError::MatchFailed(
            "X ⌟ lambda0 ≠ 0".to_string(),
        ));
    }
    let hooked = lambda0.d().interior(&cauchy)?;
    if !hooked.wedge(&lambda0)?.is_zero() {
        return Err(TwistorError::MatchFailed(
            "X ⌟ d(lambda0) ≠ 0 mod lambda0".to_string(),
        ));
    }
    // L_X Υ₀ vanishes on ker λ₀ (and here even identically).
    let lu = upsilon0.lie_derivative(&cauchy)?;
    match crate::geomcalc::proportional_mod(&lu, &SymTensor::zero(&b6), &lambda0, "z")? {
        PropMod::Yes { .. } => {}
        PropMod::No { .. } => {
            return Err(TwistorError::MatchFailed(
                "L_X Upsilon0 does not vanish on ker lambda0".to_string(),
            ))
        }
    }

    // Adapted coordinates: pull back through the chart map and match the flat
    // boundary pair exactly.
    let adapted = f.chart_map("adapted", &Bindings::new())?;
    let lam_a6 = adapted.pullback_form(&lambda0)?;
    let ups_a6 = adapted.pullback_sym(&upsilon0)?;
    let a5 = charts::a5();
    let lambda0_adapted = descend_form(&lam_a6, &a5)?;
    let upsilon0_adapted = descend_sym(&ups_a6, &a5)?;
    let la1 = f.one_form("la1", &Bindings::new())?;
    if let Some(bad) = first_coeff_mismatch_form(&lambda0_adapted, &la1) {
        return Err(TwistorError::MatchFailed(format!(
            "adapted lambda0 differs from the flat model at d{bad}"
        )));
    }
    // The flat representative is a conformal class element: the adapted
    // tensor must be an exact constant multiple of it (the factor is −9 for
    // the representative normalizations in use).
    let up1 = f.sym_tensor("up1", &Bindings::new())?;
    let factor = upsilon0_adapted.multiple_of(&up1).ok_or_else(|| {
        let diff = upsilon0_adapted.sub(&up1);
        let witness = diff.terms.keys().next().cloned();
        TwistorError::MatchFailed(format!(
            "adapted Upsilon0 is not a constant multiple of the flat model (first difference at {witness:?})"
        ))
    })?;
    let factor_const = factor.constant_value().ok_or_else(|| {
        TwistorError::MatchFailed(format!(
            "adapted Upsilon0 relates to the flat model by a non-constant factor {factor}"
        ))
    })?;
    if factor_const.is_zero() {
        return Err(TwistorError::MatchFailed(
            "adapted Upsilon0 vanishes".to_string(),
        ));
    }

    Ok(BoundaryData {
        lambda0,
        upsilon0,
        cauchy,
        lambda0_adapted,
        upsilon0_adapted,
        upsilon_factor: factor,
    })
}

fn first_coeff_mismatch_form(a: &DiffForm, b: &DiffForm) -> Option<String> {
    let diff = a.sub(b);
    diff.terms.keys().next().map(|m| {
        let i = m.trailing_zeros() as usize;
        a.chart.var_name(i).to_string()
    })
}

/// Check x₅-independence and the absence of dx₅, then transport to the
/// 5-dimensional quotient chart.
fn descend_form(form: &DiffForm, a5: &crate::scalar::Chart) -> Result<DiffForm, TwistorError> {
    let a6 = charts::a6();
    assert!(form.chart == a6);
    let x5 = a6.index_of("x5").unwrap();
    let mut out = DiffForm::zero(a5, form.degree);
    let project: Vec<RatExpr> = a6
        .vars()
        .iter()
        .map(|v| {
            if v == "x5" {
                RatExpr::zero(a5)
            } else {
                RatExpr::var(a5, v).unwrap()
            }
        })
        .collect();
    for (mask, c) in &form.terms {
        if mask & (1 << x5) != 0 {
            return Err(TwistorError::MatchFailed(
                "adapted object has a dx5 component".to_string(),
            ));
        }
        if c.num.uses_var(x5) || c.den.uses_var(x5) {
            return Err(TwistorError::MatchFailed(
                "adapted object depends on x5".to_string(),
            ));
        }
        let coeff = c
            .substitute(a5, &project)
            .map_err(crate::geomcalc::GeomError::Scalar)?;
        out.insert_add(*mask, coeff);
    }
    Ok(out)
}

fn descend_sym(t: &SymTensor, a5: &crate::scalar::Chart) -> Result<SymTensor, TwistorError> {
    let a6 = charts::a6();
    assert!(t.chart == a6);
    let x5 = a6.index_of("x5").unwrap();
    let project: Vec<RatExpr> = a6
        .vars()
        .iter()
        .map(|v| {
            if v == "x5" {
                RatExpr::zero(a5)
            } else {
                RatExpr::var(a5, v).unwrap()
            }
        })
        .collect();
    let mut out = SymTensor::zero(a5);
    for (mono, c) in &t.terms {
        if mono[x5] != 0 {
            return Err(TwistorError::MatchFailed(
                "adapted tensor has a dx5 component".to_string(),
            ));
        }
        if c.num.uses_var(x5) || c.den.uses_var(x5) {
            return Err(TwistorError::MatchFailed(
                "adapted tensor depends on x5".to_string(),
            ));
        }
        let coeff = c
            .substitute(a5, &project)
            .map_err(crate::geomcalc::GeomError::Scalar)?;
        out.insert_add(mono[..5].to_vec(), coeff);
    }
    Ok(out)
}

/// The quick exactness check quoted with the boundary model: derivative data
/// of λ₀ in adapted coordinates.
pub fn adapted_contact_volume() -> Result<RatExpr, TwistorError> {
    let a5 = charts::a5();
    let la1 = fixtures().one_form("la1", &Bindings::new())?;
    let d = la1.d();
    let top = d.wedge(&d)?.wedge(&la1)?;
    let full: u16 = (1 << 5) - 1;
    Ok(top
        .terms
        .get(&full)
        .cloned()
        .unwrap_or_else(|| RatExpr::zero(&a5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_reduction_matches_flat_model() {
        let data = boundary_reduction().unwrap();
        assert_eq!(data.lambda0_adapted.terms.len(), 3);
        assert_eq!(data.upsilon0_adapted.terms.len(), 5);
        assert!(data
            .upsilon_factor
            .equals(&RatExpr::from_int(&charts::a5(), -9)));
    }

    #[test]
    fn adapted_volume_is_constant() {
        // dλ₀ ∧ dλ₀ ∧ λ₀ = −6 · dx0∧…∧dx4 for λ₀ = dx0 − 3x2 dx3 + x1 dx4.
        let a5 = charts::a5();
        let v = adapted_contact_volume().unwrap();
        assert!(v.equals(&parse_scalar("-6", &a5, &Bindings::new()).unwrap()));
    }
}

//! The explicit θ-coframe of the power-law family, with transcription
//! self-checks: the top wedge does not vanish, θ⁰..θ⁴ are semibasic, the
//! seven-form ideal is differentially closed, and the leaf-space ideal
//! spanned by θ⁰..θ⁴ is differentially closed.

use crate::geomcalc::DiffForm;
use crate::scalar::{charts, Rat};
use crate::twistor::backend::PowerLawBackend;
use crate::twistor::fixtures::fixtures;
use crate::twistor::TwistorError;

#[derive(Clone)]
pub struct CoframeFamily {
    pub backend: PowerLawBackend,
    pub theta: Vec<DiffForm>,
}

pub fn build_theta_coframe(k: &Rat) -> Result<CoframeFamily, TwistorError> {
    let backend = PowerLawBackend::new(k)?;
    let b = backend.bindings();
    let f = fixtures();
    let theta: Vec<DiffForm> = (0..7)
        .map(|i| f.one_form(&format!("theta{i}"), &b))
        .collect::<Result<_, _>>()?;
    let family = CoframeFamily { backend, theta };
    family.self_check()?;
    Ok(family)
}

impl CoframeFamily {
    pub fn k(&self) -> &Rat {
        &self.backend.k
    }

    /// Wedge of all seven coframe forms.
    pub fn top_wedge(&self) -> Result<DiffForm, TwistorError> {
        let mut acc = self.theta[0].clone();
        for t in &self.theta[1..] {
            acc = acc.wedge(t)?;
        }
        Ok(acc)
    }

    /// Wedge of θ⁰..θ⁴ (the leaf-space ideal).
    pub fn base_wedge(&self) -> Result<DiffForm, TwistorError> {
        let mut acc = self.theta[0].clone();
        for t in &self.theta[1..5] {
            acc = acc.wedge(t)?;
        }
        Ok(acc)
    }

    fn self_check(&self) -> Result<(), TwistorError> {
        let top = self.top_wedge()?;
        if top.is_zero() {
            return Err(TwistorError::TranscriptionSelfCheckFailed(
                "theta0 ∧ … ∧ theta6 = 0".to_string(),
            ));
        }
        // θ⁰..θ⁴ must be semibasic: no dv or dw components.
        let c = charts::m7();
        let vbit = 1u16 << c.index_of("v").unwrap();
        let wbit = 1u16 << c.index_of("w").unwrap();
        for (a, t) in self.theta.iter().take(5).enumerate() {
            for mask in t.terms.keys() {
                if mask & (vbit | wbit) != 0 {
                    return Err(TwistorError::TranscriptionSelfCheckFailed(format!(
                        "theta{a} is not semibasic"
                    )));
                }
            }
        }
        // Full-ideal integrability: dθ^A ∧ θ⁰∧…∧θ⁶ = 0 for all A (a form of
        // degree 9 on a 7-chart, so it vanishes identically; computed anyway
        // for the record).
        for (a, t) in self.theta.iter().enumerate() {
            let wedge = t.d().wedge(&top)?;
            if !wedge.is_zero() {
                return Err(TwistorError::TranscriptionSelfCheckFailed(format!(
                    "d(theta{a}) ∧ theta0 ∧ … ∧ theta6 ≠ 0"
                )));
            }
        }
        // Leaf-space integrability: dθ^a ∧ θ⁰∧…∧θ⁴ = 0 for a = 0..4.
        let base = self.base_wedge()?;
        for (a, t) in self.theta.iter().take(5).enumerate() {
            let wedge = t.d().wedge(&base)?;
            if !wedge.is_zero() {
                return Err(TwistorError::TranscriptionSelfCheckFailed(format!(
                    "d(theta{a}) ∧ theta0 ∧ … ∧ theta4 ≠ 0"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    #[test]
    fn coframe_self_checks_k2_k3_khalf() {
        for k in [rint(2), rint(3), rat(1, 2)] {
            let cf = build_theta_coframe(&k).unwrap();
            assert_eq!(cf.theta.len(), 7, "k = {k}");
        }
    }

    #[test]
    fn degenerate_parameters_rejected() {
        assert!(matches!(
            build_theta_coframe(&rint(1)),
            Err(TwistorError::DegenerateParameter(_))
        ));
    }
}

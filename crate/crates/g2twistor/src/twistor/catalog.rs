//! Named symmetry catalogs, fully verified on construction. A verification
//! failure names the offending generator and is treated as a transcription
//! alarm; generators whose printed formulas are undefined at the requested
//! parameter (or require an irrational square root) are skipped explicitly.

use num_traits::Zero;

use crate::geomcalc::VectorField;
use crate::scalar::{nth_root_exact, rat, rint, Bindings, Rat, RatExpr};
use crate::twistor::backend::PowerLawBackend;
use crate::twistor::contact::{build_contact_data, LieContactData};
use crate::twistor::fixtures::fixtures;
use crate::twistor::symmetry::{verify_symmetry, SymmetryKind, Verification};
use crate::twistor::TwistorError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogName {
    /// X₁..X₇ as distribution symmetries of D_k.
    DistK,
    /// X₁..X₉ as conformal symmetries of the conformal representative of D_k.
    ConfK,
    /// The 14 distribution symmetries of the flat D₂.
    Dist2Full,
    /// The 21 conformal symmetries of the flat conformal class.
    Conf2Full,
    /// The lifted symmetries X̃₁..X̃₇ of the Lie contact structure.
    LieContactK,
    /// The 21 Lie contact symmetries at k = 2.
    LieContact2Full,
    /// The 14 symmetries of the flat boundary contact pair.
    G2ContactFlat,
}

impl CatalogName {
    pub fn parse(s: &str) -> Option<CatalogName> {
        Some(match s {
            "dist_k" => CatalogName::DistK,
            "conf_k" => CatalogName::ConfK,
            "dist2_full" => CatalogName::Dist2Full,
            "conf2_full" => CatalogName::Conf2Full,
            "liecontact_k" => CatalogName::LieContactK,
            "liecontact2_full" => CatalogName::LieContact2Full,
            "g2contact_flat" => CatalogName::G2ContactFlat,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::DistK => "dist_k",
            CatalogName::ConfK => "conf_k",
            CatalogName::Dist2Full => "dist2_full",
            CatalogName::Conf2Full => "conf2_full",
            CatalogName::LieContactK => "liecontact_k",
            CatalogName::LieContact2Full => "liecontact2_full",
            CatalogName::G2ContactFlat => "g2contact_flat",
        }
    }
}

pub struct SymmetryCatalog {
    pub name: CatalogName,
    pub k: Option<Rat>,
    pub generators: Vec<(String, VectorField)>,
    /// Verification factor per generator (conformal φ or contact f).
    pub factors: Vec<Option<RatExpr>>,
    /// Generators whose printed formulas cannot be instantiated, with reasons.
    pub skipped: Vec<(String, String)>,
    /// Contact data used for Lie contact verification, kept for reuse.
    pub contact: Option<LieContactData>,
}

fn is_flat_k(k: &Rat) -> bool {
    [rint(2), rat(2, 3), rat(1, 3), rint(-1)].contains(k)
}

fn load_named(
    names: &[&str],
    bindings: &Bindings,
) -> Result<Vec<(String, VectorField)>, TwistorError> {
    names
        .iter()
        .map(|n| Ok((n.to_string(), fixtures().vector_field(n, bindings)?)))
        .collect()
}

/// The unique obstruction to instantiating X₇ / X̃₇: the printed coefficient
/// 1/(k(2k−1)) is undefined at k = 1/2.
fn x7_defined(k: &Rat) -> bool {
    *k != rat(1, 2)
}

pub fn catalog(name: CatalogName, k: Option<&Rat>) -> Result<SymmetryCatalog, TwistorError> {
    match name {
        CatalogName::DistK => {
            let k = required_k(k)?;
            let backend = PowerLawBackend::new(&k)?;
            let b = backend.bindings();
            let mut skipped = Vec::new();
            let mut names = vec!["X1", "X2", "X3", "X4", "X5", "X6"];
            if x7_defined(&k) {
                names.push("X7");
            } else {
                skipped.push((
                    "X7".to_string(),
                    "coefficient 1/(k(2k-1)) undefined at k = 1/2".to_string(),
                ));
            }
            let generators = load_named(&names, &b)?;
            let (xi1, xi2) = backend.distribution();
            let kind = SymmetryKind::Distribution {
                xi1: &xi1,
                xi2: &xi2,
            };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped,
                contact: None,
            })
        }
        CatalogName::ConfK => {
            let k = required_k(k)?;
            if is_flat_k(&k) {
                return Err(TwistorError::IncompatibleParameters(format!(
                    "k = {k} is conformally flat; use conf2_full for the flat case"
                )));
            }
            let backend = PowerLawBackend::new(&k)?;
            let mut b = backend.bindings();
            let mut skipped = Vec::new();
            let mut names = vec!["X1", "X2", "X3", "X4", "X5", "X6"];
            if x7_defined(&k) {
                names.push("X7");
            } else {
                skipped.push((
                    "X7".to_string(),
                    "coefficient 1/(k(2k-1)) undefined at k = 1/2".to_string(),
                ));
            }
            // X8, X9 need the square root of 10k²−10k+5 to be rational.
            let disc = rint(10) * k.clone() * k.clone() - rint(10) * k.clone() + rint(5);
            match nth_root_exact(&disc, 2) {
                Some(s) => {
                    b.insert("s".to_string(), s);
                    names.push("X8");
                    names.push("X9");
                }
                None => {
                    for n in ["X8", "X9"] {
                        skipped.push((
                            n.to_string(),
                            format!("sqrt(10k^2-10k+5) = sqrt({disc}) is irrational"),
                        ));
                    }
                }
            }
            let generators = load_named(&names, &b)?;
            let metric = fixtures().sym_tensor("metric_example", &b)?;
            let kind = SymmetryKind::Conformal { metric: &metric };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped,
                contact: None,
            })
        }
        CatalogName::Dist2Full => {
            let k = fixed_k(k, 2)?;
            let backend = PowerLawBackend::new(&k)?;
            let b = backend.bindings();
            let names = [
                "X1", "X2", "X3", "X4", "X5", "X6", "X7", "Y1", "Y2", "Y3", "Y4", "Y5", "Y6",
                "Y7",
            ];
            let generators = load_named(&names, &b)?;
            let (xi1, xi2) = backend.distribution();
            let kind = SymmetryKind::Distribution {
                xi1: &xi1,
                xi2: &xi2,
            };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped: Vec::new(),
                contact: None,
            })
        }
        CatalogName::Conf2Full => {
            let k = fixed_k(k, 2)?;
            let b = crate::scalar::bindings(&[("k", k.clone())]);
            let names = [
                "X1", "X2", "X3", "X4", "X5", "X6", "X7", "Y1", "Y2", "Y3", "Y4", "Y5", "Y6",
                "Y7", "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7",
            ];
            let generators = load_named(&names, &b)?;
            let metric = fixtures().sym_tensor("conffl", &b)?;
            let kind = SymmetryKind::Conformal { metric: &metric };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped: Vec::new(),
                contact: None,
            })
        }
        CatalogName::LieContactK => {
            let k = required_k(k)?;
            let data = build_contact_data(&k)?;
            let b = data.coframe.backend.bindings();
            let mut skipped = Vec::new();
            let mut names = vec!["Xt1", "Xt2", "Xt3", "Xt4", "Xt5", "Xt6"];
            if x7_defined(&k) {
                names.push("Xt7");
            } else {
                skipped.push((
                    "Xt7".to_string(),
                    "coefficient 1/(k(2k-1)) undefined at k = 1/2".to_string(),
                ));
            }
            let generators = load_named(&names, &b)?;
            let kind = SymmetryKind::LieContact {
                lambda: &data.lambda,
                upsilon: &data.upsilon,
                solve_var: "z",
            };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped,
                contact: Some(data),
            })
        }
        CatalogName::LieContact2Full => {
            let k = fixed_k(k, 2)?;
            let data = build_contact_data(&k)?;
            let b = data.coframe.backend.bindings();
            let names = [
                "Xt1", "Xt2", "Xt3", "Xt4", "Xt5", "Xt6", "Xt7", "Yt1", "Yt2", "Yt3", "Yt4",
                "Yt5", "Yt6", "Yt7", "Zh1", "Zh2", "Zh3", "Zh4", "Zh5", "Zh6", "Zh7",
            ];
            let generators = load_named(&names, &b)?;
            let kind = SymmetryKind::LieContact {
                lambda: &data.lambda,
                upsilon: &data.upsilon,
                solve_var: "z",
            };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: Some(k),
                generators,
                factors,
                skipped: Vec::new(),
                contact: Some(data),
            })
        }
        CatalogName::G2ContactFlat => {
            let b = Bindings::new();
            let names = [
                "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10", "G11", "G12",
                "G13", "G14",
            ];
            let generators: Vec<(String, VectorField)> = load_named(&names, &b)?
                .into_iter()
                .map(|(n, g)| Ok((n, normalize_g2contact_coordinates(&g)?)))
                .collect::<Result<_, TwistorError>>()?;
            let lambda = fixtures().one_form("la1", &b)?;
            let upsilon = fixtures().sym_tensor("up1", &b)?;
            let kind = SymmetryKind::G2Contact {
                lambda: &lambda,
                upsilon: &upsilon,
                solve_var: "x0",
            };
            let factors = verify_all(&generators, &kind)?;
            Ok(SymmetryCatalog {
                name,
                k: None,
                generators,
                factors,
                skipped: Vec::new(),
                contact: None,
            })
        }
    }
}

/// The stored generator list uses coordinates in which the contact form reads
/// dx0 + 3x3 dx2 + x1 dx4; the change y0 = x0 + 3 x2 x3 rewrites that form as
/// the fixture's la1 = dx0 − 3x2 dx3 + x1 dx4. Push the fields through it.
fn normalize_g2contact_coordinates(g: &VectorField) -> Result<VectorField, TwistorError> {
    let a5 = crate::scalar::charts::a5();
    let x2 = RatExpr::var(&a5, "x2").unwrap();
    let x3 = RatExpr::var(&a5, "x3").unwrap();
    let three = RatExpr::from_int(&a5, 3);
    let new0 = g.comps[0]
        .add_ref(&three.mul_ref(&x3).mul_ref(&g.comps[2]))
        .add_ref(&three.mul_ref(&x2).mul_ref(&g.comps[3]));
    let back: Vec<RatExpr> = (0..5)
        .map(|i| {
            if i == 0 {
                let x0 = RatExpr::var_index(&a5, 0);
                x0.sub_ref(&three.mul_ref(&x2).mul_ref(&x3))
            } else {
                RatExpr::var_index(&a5, i)
            }
        })
        .collect();
    let mut comps = g.comps.clone();
    comps[0] = new0;
    let comps: Vec<RatExpr> = comps
        .iter()
        .map(|c| c.substitute(&a5, &back))
        .collect::<Result<_, _>>()
        .map_err(crate::geomcalc::GeomError::Scalar)?;
    Ok(VectorField::from_comps(&a5, comps))
}

fn required_k(k: Option<&Rat>) -> Result<Rat, TwistorError> {
    k.cloned().ok_or_else(|| {
        TwistorError::IncompatibleParameters("this catalog requires --k".to_string())
    })
}

fn fixed_k(k: Option<&Rat>, expected: i64) -> Result<Rat, TwistorError> {
    let e = rint(expected);
    match k {
        None => Ok(e),
        Some(v) if *v == e => Ok(e),
        Some(v) => Err(TwistorError::IncompatibleParameters(format!(
            "this catalog is the k = {expected} case; got k = {v}"
        ))),
    }
}

fn verify_all(
    generators: &[(String, VectorField)],
    kind: &SymmetryKind<'_>,
) -> Result<Vec<Option<RatExpr>>, TwistorError> {
    let mut factors = Vec::with_capacity(generators.len());
    for (name, g) in generators {
        match verify_symmetry(g, kind)? {
            Verification::Pass { factor } => factors.push(factor),
            Verification::Fail { certificate } => {
                return Err(TwistorError::VerificationFailed(format!(
                    "{name}: {certificate}"
                )))
            }
        }
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_k3_catalog_verifies() {
        let c = catalog(CatalogName::DistK, Some(&rint(3))).unwrap();
        assert_eq!(c.generators.len(), 7);
        assert!(c.skipped.is_empty());
    }

    #[test]
    fn dist_khalf_skips_x7() {
        let c = catalog(CatalogName::DistK, Some(&rat(1, 2))).unwrap();
        assert_eq!(c.generators.len(), 6);
        assert_eq!(c.skipped.len(), 1);
    }

    #[test]
    fn g2contact_catalog_verifies() {
        let c = catalog(CatalogName::G2ContactFlat, None).unwrap();
        assert_eq!(c.generators.len(), 14);
    }

    #[test]
    fn incompatible_parameters() {
        assert!(matches!(
            catalog(CatalogName::Dist2Full, Some(&rint(3))),
            Err(TwistorError::IncompatibleParameters(_))
        ));
        assert!(matches!(
            catalog(CatalogName::ConfK, Some(&rint(2))),
            Err(TwistorError::IncompatibleParameters(_))
        ));
    }
}

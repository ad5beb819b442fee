//! Exact solver for the structure equations of the distribution coframe: the
//! seven connection forms Ω₁..Ω₇ and the 24 curvature functions.
//!
//! The fourteen structure equations are linear in the Ω-coefficients once
//! both sides are expanded in the θ-cobasis. Stage one solves the seven
//! dθ-equations (which also involve nine curvature functions) as one exact
//! linear system with constant matrix and function-valued right-hand side;
//! stage two reads the remaining curvature functions off the dΩ-equations
//! and re-verifies every equation, so the final residual of the whole system
//! is exactly zero.

use std::collections::BTreeMap;

use crate::geomcalc::{DiffForm, GeomError};
use crate::liealg::models::{G2_PARAM_NAMES, G2_PLACEMENTS_PUBLIC};
use crate::scalar::{
    charts, exact_linear_solve, rat, LinSolve, Matrix, Rat, RatExpr,
};
use crate::twistor::coframe::CoframeFamily;
use crate::twistor::TwistorError;

pub const CURVATURE_NAMES: [&str; 24] = [
    "a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "e1", "e2", "f",
    "q1", "q2", "p1", "p2", "p3", "h1", "h2", "h3", "h4",
];

fn cidx(name: &str) -> usize {
    CURVATURE_NAMES.iter().position(|n| *n == name).unwrap()
}

/// One structure equation: d(lhs) = Σ θ∧Ω + Σ Ω∧Ω + Σ θ∧θ + curvature slots.
struct Equation {
    /// 0..6 = θ⁰..θ⁶; 7..13 = Ω₁..Ω₇.
    lhs: usize,
    /// (θ index, Ω index 1..7, coefficient) representing coeff·θ^B∧Ω_i.
    theta_omega: Vec<(usize, usize, Rat)>,
    /// (i, j, coefficient) representing coeff·Ω_i∧Ω_j, 1-based indices.
    omega_omega: Vec<(usize, usize, Rat)>,
    /// (B, C, coefficient) representing coeff·θ^B∧θ^C with B < C.
    theta_theta: Vec<(usize, usize, Rat)>,
    /// Slot (B < C) carrying Σ coeff · curvature function.
    curvature: Vec<((usize, usize), Vec<(usize, Rat)>)>,
}

fn equations() -> Vec<Equation> {
    let r = |n: i64, d: i64| rat(n, d);
    let one = || rat(1, 1);
    vec![
        // dθ⁰ = θ⁰∧(Ω₁+Ω₄) + 3θ¹∧θ⁶ + 3θ²∧θ⁵ + θ³∧θ⁴
        Equation {
            lhs: 0,
            theta_omega: vec![(0, 1, one()), (0, 4, one())],
            omega_omega: vec![],
            theta_theta: vec![(1, 6, r(3, 1)), (2, 5, r(3, 1)), (3, 4, one())],
            curvature: vec![],
        },
        // dθ¹ = θ⁰∧θ³ + θ¹∧(2Ω₁+Ω₄) + θ²∧Ω₂
        Equation {
            lhs: 1,
            theta_omega: vec![(1, 1, r(2, 1)), (1, 4, one()), (2, 2, one())],
            omega_omega: vec![],
            theta_theta: vec![(0, 3, one())],
            curvature: vec![],
        },
        // dθ² = θ⁰∧θ⁴ + θ¹∧Ω₃ + θ²∧(Ω₁+2Ω₄)
        Equation {
            lhs: 2,
            theta_omega: vec![(1, 3, one()), (2, 1, one()), (2, 4, r(2, 1))],
            omega_omega: vec![],
            theta_theta: vec![(0, 4, one())],
            curvature: vec![],
        },
        // dθ³ = 4θ⁰∧θ⁵ + θ¹∧Ω₅ + θ³∧Ω₁ + θ⁴∧Ω₂
        Equation {
            lhs: 3,
            theta_omega: vec![(1, 5, one()), (3, 1, one()), (4, 2, one())],
            omega_omega: vec![],
            theta_theta: vec![(0, 5, r(4, 1))],
            curvature: vec![],
        },
        // dθ⁴ = −4θ⁰∧θ⁶ + θ²∧Ω₅ + θ³∧Ω₃ + θ⁴∧Ω₄
        Equation {
            lhs: 4,
            theta_omega: vec![(2, 5, one()), (3, 3, one()), (4, 4, one())],
            omega_omega: vec![],
            theta_theta: vec![(0, 6, r(-4, 1))],
            curvature: vec![],
        },
        // dθ⁵ = Ω₂∧θ⁶ + Ω₄∧θ⁵ − ⅓Ω₅∧θ³ − ⅓Ω₇∧θ⁰ + curvature
        Equation {
            lhs: 5,
            theta_omega: vec![
                (6, 2, r(-1, 1)),
                (5, 4, r(-1, 1)),
                (3, 5, r(1, 3)),
                (0, 7, r(1, 3)),
            ],
            omega_omega: vec![],
            theta_theta: vec![],
            curvature: vec![
                ((0, 1), vec![(cidx("c2"), r(-1, 4))]),
                ((0, 2), vec![(cidx("c3"), r(-1, 4))]),
                ((1, 2), vec![(cidx("e1"), one())]),
                ((1, 3), vec![(cidx("b2"), r(1, 4))]),
                ((1, 4), vec![(cidx("b3"), r(1, 4))]),
                ((2, 3), vec![(cidx("b3"), r(1, 4))]),
                ((2, 4), vec![(cidx("b4"), r(1, 4))]),
            ],
        },
        // dθ⁶ = Ω₁∧θ⁶ + Ω₃∧θ⁵ + ⅓Ω₅∧θ⁴ − ⅓Ω₆∧θ⁰ + curvature
        Equation {
            lhs: 6,
            theta_omega: vec![
                (6, 1, r(-1, 1)),
                (5, 3, r(-1, 1)),
                (4, 5, r(-1, 3)),
                (0, 6, r(1, 3)),
            ],
            omega_omega: vec![],
            theta_theta: vec![],
            curvature: vec![
                ((0, 1), vec![(cidx("c1"), r(-1, 4))]),
                ((0, 2), vec![(cidx("c2"), r(-1, 4))]),
                ((1, 2), vec![(cidx("e2"), one())]),
                ((1, 3), vec![(cidx("b1"), r(1, 4))]),
                ((1, 4), vec![(cidx("b2"), r(1, 4))]),
                ((2, 3), vec![(cidx("b2"), r(1, 4))]),
                ((2, 4), vec![(cidx("b3"), r(1, 4))]),
            ],
        },
        // dΩ₁ = −Ω₂∧Ω₃ − ⅓Ω₅∧θ⁰ − Ω₆∧θ¹ − 2θ³∧θ⁶ + θ⁴∧θ⁵ + curvature
        Equation {
            lhs: 7,
            theta_omega: vec![(0, 5, r(1, 3)), (1, 6, one())],
            omega_omega: vec![(2, 3, r(-1, 1))],
            theta_theta: vec![(3, 6, r(-2, 1)), (4, 5, one())],
            curvature: vec![
                ((0, 1), vec![(cidx("b2"), r(-1, 1))]),
                ((0, 2), vec![(cidx("b3"), r(-1, 1))]),
                ((1, 2), vec![(cidx("c2"), r(3, 8))]),
                ((1, 3), vec![(cidx("a2"), one())]),
                ((1, 4), vec![(cidx("a3"), one())]),
                ((2, 3), vec![(cidx("a3"), one())]),
                ((2, 4), vec![(cidx("a4"), one())]),
            ],
        },
        // dΩ₂ = −Ω₁∧Ω₂ − Ω₂∧Ω₄ − Ω₇∧θ¹ − 3θ³∧θ⁵ + curvature
        Equation {
            lhs: 8,
            theta_omega: vec![(1, 7, one())],
            omega_omega: vec![(1, 2, r(-1, 1)), (2, 4, r(-1, 1))],
            theta_theta: vec![(3, 5, r(-3, 1))],
            curvature: vec![
                ((0, 1), vec![(cidx("b3"), r(-1, 1))]),
                ((0, 2), vec![(cidx("b4"), r(-1, 1))]),
                ((1, 2), vec![(cidx("c3"), r(3, 8))]),
                ((1, 3), vec![(cidx("a3"), one())]),
                ((1, 4), vec![(cidx("a4"), one())]),
                ((2, 3), vec![(cidx("a4"), one())]),
                ((2, 4), vec![(cidx("a5"), one())]),
            ],
        },
        // dΩ₃ = Ω₁∧Ω₃ + Ω₃∧Ω₄ − Ω₆∧θ² − 3θ⁴∧θ⁶ + curvature
        Equation {
            lhs: 9,
            theta_omega: vec![(2, 6, one())],
            omega_omega: vec![(1, 3, one()), (3, 4, one())],
            theta_theta: vec![(4, 6, r(-3, 1))],
            curvature: vec![
                ((0, 1), vec![(cidx("b1"), one())]),
                ((0, 2), vec![(cidx("b2"), one())]),
                ((1, 2), vec![(cidx("c1"), r(-3, 8))]),
                ((1, 3), vec![(cidx("a1"), r(-1, 1))]),
                ((1, 4), vec![(cidx("a2"), r(-1, 1))]),
                ((2, 3), vec![(cidx("a2"), r(-1, 1))]),
                ((2, 4), vec![(cidx("a3"), r(-1, 1))]),
            ],
        },
        // dΩ₄ = Ω₂∧Ω₃ − ⅓Ω₅∧θ⁰ − Ω₇∧θ² + θ³∧θ⁶ − 2θ⁴∧θ⁵ + curvature
        Equation {
            lhs: 10,
            theta_omega: vec![(0, 5, r(1, 3)), (2, 7, one())],
            omega_omega: vec![(2, 3, one())],
            theta_theta: vec![(3, 6, one()), (4, 5, r(-2, 1))],
            curvature: vec![
                ((0, 1), vec![(cidx("b2"), one())]),
                ((0, 2), vec![(cidx("b3"), one())]),
                ((1, 2), vec![(cidx("c2"), r(-3, 8))]),
                ((1, 3), vec![(cidx("a2"), r(-1, 1))]),
                ((1, 4), vec![(cidx("a3"), r(-1, 1))]),
                ((2, 3), vec![(cidx("a3"), r(-1, 1))]),
                ((2, 4), vec![(cidx("a4"), r(-1, 1))]),
            ],
        },
        // dΩ₅ = Ω₁∧Ω₅ + Ω₄∧Ω₅ − Ω₆∧θ³ − Ω₇∧θ⁴ − 12θ⁵∧θ⁶ + curvature
        Equation {
            lhs: 11,
            theta_omega: vec![(3, 6, one()), (4, 7, one())],
            omega_omega: vec![(1, 5, one()), (4, 5, one())],
            theta_theta: vec![(5, 6, r(-12, 1))],
            curvature: vec![
                ((0, 1), vec![(cidx("e2"), r(4, 1))]),
                ((0, 2), vec![(cidx("e1"), r(4, 1))]),
                ((1, 2), vec![(cidx("f"), one())]),
                ((1, 3), vec![(cidx("c1"), r(-3, 8))]),
                ((1, 4), vec![(cidx("c2"), r(-3, 8))]),
                ((2, 3), vec![(cidx("c2"), r(-3, 8))]),
                ((2, 4), vec![(cidx("c3"), r(-3, 8))]),
            ],
        },
        // dΩ₆ = 2Ω₁∧Ω₆ + Ω₃∧Ω₇ + Ω₄∧Ω₆ − 3Ω₅∧θ⁶ + curvature
        Equation {
            lhs: 12,
            theta_omega: vec![(6, 5, r(3, 1))],
            omega_omega: vec![(1, 6, r(2, 1)), (3, 7, one()), (4, 6, one())],
            theta_theta: vec![],
            curvature: vec![
                ((0, 1), vec![(cidx("p1"), r(-1, 1))]),
                ((0, 2), vec![(cidx("p2"), r(-1, 1))]),
                ((1, 2), vec![(cidx("q1"), one())]),
                ((1, 3), vec![(cidx("h1"), one())]),
                ((1, 4), vec![(cidx("h2"), one())]),
                ((2, 3), vec![(cidx("h2"), one())]),
                ((2, 4), vec![(cidx("h3"), one())]),
            ],
        },
        // dΩ₇ = Ω₁∧Ω₇ + Ω₂∧Ω₆ + 2Ω₄∧Ω₇ − 3Ω₅∧θ⁵ + curvature
        Equation {
            lhs: 13,
            theta_omega: vec![(5, 5, r(3, 1))],
            omega_omega: vec![(1, 7, one()), (2, 6, one()), (4, 7, r(2, 1))],
            theta_theta: vec![],
            curvature: vec![
                (
                    (0, 1),
                    vec![(cidx("f"), r(-2, 3)), (cidx("p2"), r(-1, 1))],
                ),
                ((0, 2), vec![(cidx("p3"), r(-1, 1))]),
                ((1, 2), vec![(cidx("q2"), one())]),
                (
                    (1, 3),
                    vec![(cidx("h2"), one()), (cidx("e2"), r(-1, 1))],
                ),
                (
                    (1, 4),
                    vec![(cidx("h3"), one()), (cidx("e1"), r(-1, 1))],
                ),
                (
                    (2, 3),
                    vec![(cidx("h3"), one()), (cidx("e1"), r(-1, 1))],
                ),
                ((2, 4), vec![(cidx("h4"), one())]),
            ],
        },
    ]
}


pub struct ConnectionForms {
    /// Ω_i expanded in the θ-cobasis: omega_theta[i][A].
    pub omega_theta: Vec<Vec<RatExpr>>,
    /// Ω_i as coordinate 1-forms.
    pub omega: Vec<DiffForm>,
    /// Dimension of the affine solution space of the Ω-system (0 = unique).
    pub solution_space_dim: usize,
}

pub struct CurvatureCoefficients {
    pub values: BTreeMap<String, RatExpr>,
}

impl CurvatureCoefficients {
    pub fn all_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn nonzero_names(&self) -> Vec<String> {
        self.values
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k.clone())
            .collect()
    }
}

/// All 21 slot pairs (B < C).
fn slots() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for b in 0..7 {
        for c in (b + 1)..7 {
            v.push((b, c));
        }
    }
    v
}

fn slot_index(b: usize, c: usize) -> usize {
    slots().iter().position(|&(x, y)| (x, y) == (b, c)).unwrap()
}

/// Components of a coordinate 2-form in the θ-cobasis.
fn to_theta_cobasis(
    form: &DiffForm,
    ninv: &Matrix<RatExpr>,
) -> Result<Vec<RatExpr>, TwistorError> {
    let chart = charts::m7();
    let zero = RatExpr::zero(&chart);
    let mut out = vec![zero.clone(); 21];
    for (mask, coeff) in &form.terms {
        // Decompose the mask into (μ < ν).
        let mu = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << mu);
        let nu = rest.trailing_zeros() as usize;
        for (s, (b, c)) in slots().into_iter().enumerate() {
            let t = ninv
                .at(mu, b)
                .mul_ref(ninv.at(nu, c))
                .sub_ref(&ninv.at(mu, c).mul_ref(ninv.at(nu, b)));
            if !t.is_zero() {
                out[s] = out[s].add_ref(&coeff.mul_ref(&t));
            }
        }
    }
    Ok(out)
}

/// Solver state: which connection forms and curvature functions are known.
struct SolveState<'a> {
    cf: &'a CoframeFamily,
    minv: Matrix<RatExpr>,
    dtheta: Vec<Vec<RatExpr>>,
    /// Ω_i expanded in the θ-cobasis (1-based index i − 1), when solved.
    omega_theta: Vec<Option<Vec<RatExpr>>>,
    /// Ω_i as coordinate forms.
    omega: Vec<Option<DiffForm>>,
    curvature: BTreeMap<usize, RatExpr>,
    freedom: usize,
}

impl<'a> SolveState<'a> {
    /// Solve a batch of structure equations for a set of Ω indices (1-based)
    /// and a set of curvature indices, all entering linearly; everything not
    /// listed must already be known. Consistency of slots without unknowns is
    /// enforced.
    fn solve_stage(
        &mut self,
        eq_indices: &[usize],
        omega_unknowns: &[usize],
        curv_unknowns: &[usize],
        stage: &str,
    ) -> Result<(), TwistorError> {
        let chart = charts::m7();
        let zero = RatExpr::zero(&chart);
        let eqs = equations();
        let n_omega = omega_unknowns.len() * 7;
        let n_unknowns = n_omega + curv_unknowns.len();
        let ocol = |oi: usize, a: usize| -> Option<usize> {
            omega_unknowns
                .iter()
                .position(|x| *x == oi)
                .map(|p| p * 7 + a)
        };
        let mut rows: Vec<Vec<RatExpr>> = Vec::new();
        let mut rhs: Vec<RatExpr> = Vec::new();
        for &ei in eq_indices {
            let eq = &eqs[ei];
            // d of the left-hand form, in the θ-cobasis.
            let lhs_comps: Vec<RatExpr> = if eq.lhs < 7 {
                self.dtheta[eq.lhs].clone()
            } else {
                let f = self.omega[eq.lhs - 7].as_ref().ok_or_else(|| {
                    TwistorError::Inconsistent(format!(
                        "stage {stage}: Ω{} is needed before it is solved",
                        eq.lhs - 6
                    ))
                })?;
                to_theta_cobasis(&f.d(), &self.minv)?
            };
            // Known part of the right-hand side as a coordinate 2-form.
            let mut known = DiffForm::zero(&chart, 2);
            for (tb, oi, coeff) in &eq.theta_omega {
                if ocol(*oi, 0).is_none() {
                    let om = self.omega[*oi - 1].as_ref().ok_or_else(|| {
                        TwistorError::Inconsistent(format!(
                            "stage {stage}: Ω{oi} used before solved"
                        ))
                    })?;
                    known = known.add(&self.cf.theta[*tb].wedge(om)?.scale_rat(coeff));
                }
            }
            for (oi, oj, coeff) in &eq.omega_omega {
                let a = self.omega[*oi - 1].as_ref().ok_or_else(|| {
                    TwistorError::Inconsistent(format!("stage {stage}: Ω{oi} used before solved"))
                })?;
                let b = self.omega[*oj - 1].as_ref().ok_or_else(|| {
                    TwistorError::Inconsistent(format!("stage {stage}: Ω{oj} used before solved"))
                })?;
                known = known.add(&a.wedge(b)?.scale_rat(coeff));
            }
            for (tb, tc, coeff) in &eq.theta_theta {
                known = known.add(&self.cf.theta[*tb].wedge(&self.cf.theta[*tc])?.scale_rat(coeff));
            }
            let known_comps = to_theta_cobasis(&known, &self.minv)?;
            for (s, (b, c)) in slots().into_iter().enumerate() {
                let mut row = vec![zero.clone(); n_unknowns];
                let mut any = false;
                // Unknown θ∧Ω contributions.
                for (tb, oi, coeff) in &eq.theta_omega {
                    if let Some(_col0) = ocol(*oi, 0) {
                        if *tb == b {
                            let col = ocol(*oi, c).unwrap();
                            row[col] =
                                row[col].add_ref(&RatExpr::from_rat(&chart, coeff.clone()));
                            any = true;
                        }
                        if *tb == c {
                            let col = ocol(*oi, b).unwrap();
                            row[col] =
                                row[col].sub_ref(&RatExpr::from_rat(&chart, coeff.clone()));
                            any = true;
                        }
                    }
                }
                // Curvature contributions at this slot.
                let mut value = lhs_comps[s].sub_ref(&known_comps[s]);
                for (slot, combo) in &eq.curvature {
                    if *slot == (b, c) {
                        for (ci, coeff) in combo {
                            if let Some(pos) = curv_unknowns.iter().position(|x| x == ci) {
                                row[n_omega + pos] = row[n_omega + pos]
                                    .add_ref(&RatExpr::from_rat(&chart, coeff.clone()));
                                any = true;
                            } else {
                                let kv = self.curvature.get(ci).ok_or_else(|| {
                                    TwistorError::Inconsistent(format!(
                                        "stage {stage}: curvature {} used before solved",
                                        CURVATURE_NAMES[*ci]
                                    ))
                                })?;
                                value = value.sub_ref(&kv.mul_rat(coeff));
                            }
                        }
                    }
                }
                if any {
                    rows.push(row);
                    rhs.push(value);
                } else if !value.is_zero() {
                    return Err(TwistorError::Inconsistent(format!(
                        "stage {stage}: equation {} has a nonzero residual at slot ({b},{c})",
                        eq.lhs
                    )));
                }
            }
        }
        let a = Matrix::from_rows(rows);
        let (particular, kernel) = match exact_linear_solve(&a, &rhs).map_err(TwistorError::Scalar)? {
            LinSolve::Unique(x) => (x, Vec::new()),
            LinSolve::Affine { particular, kernel } => (particular, kernel),
            LinSolve::Inconsistent { .. } => {
                return Err(TwistorError::Inconsistent(format!(
                    "stage {stage}: the linear system has no solution (transcription error)"
                )))
            }
        };
        // Freedom may not touch curvature coordinates.
        for kv in &kernel {
            for (pos, ci) in curv_unknowns.iter().enumerate() {
                if !kv[n_omega + pos].is_zero() {
                    return Err(TwistorError::AmbiguousCurvature(format!(
                        "curvature function {} is not determined on the section",
                        CURVATURE_NAMES[*ci]
                    )));
                }
            }
        }
        self.freedom += kernel.len();
        for (p, oi) in omega_unknowns.iter().enumerate() {
            let coeffs: Vec<RatExpr> = (0..7).map(|a| particular[p * 7 + a].clone()).collect();
            let mut f = DiffForm::zero(&chart, 1);
            for (a, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    f = f.add(&self.cf.theta[a].scale(c));
                }
            }
            self.omega_theta[*oi - 1] = Some(coeffs);
            self.omega[*oi - 1] = Some(f);
        }
        for (pos, ci) in curv_unknowns.iter().enumerate() {
            self.curvature.insert(*ci, particular[n_omega + pos].clone());
        }
        Ok(())
    }
}

pub fn solve_connection_forms(
    cf: &CoframeFamily,
) -> Result<(ConnectionForms, CurvatureCoefficients), TwistorError> {
    let chart = charts::m7();
    let zero = RatExpr::zero(&chart);
    // Coframe matrix M[A][μ] and its inverse N[μ][A].
    let mut m = Matrix::filled(7, 7, zero.clone());
    for (a, t) in cf.theta.iter().enumerate() {
        for (mask, c) in &t.terms {
            let mu = mask.trailing_zeros() as usize;
            *m.at_mut(a, mu) = c.clone();
        }
    }
    let minv = m
        .inverse()
        .ok_or_else(|| TwistorError::Inconsistent("coframe matrix is singular".to_string()))?;
    let dtheta: Vec<Vec<RatExpr>> = cf
        .theta
        .iter()
        .map(|t| to_theta_cobasis(&t.d(), &minv))
        .collect::<Result<_, _>>()?;
    let mut state = SolveState {
        cf,
        minv,
        dtheta,
        omega_theta: vec![None; 7],
        omega: vec![None; 7],
        curvature: BTreeMap::new(),
        freedom: 0,
    };
    let ci = |names: &[&str]| -> Vec<usize> { names.iter().map(|n| cidx(n)).collect() };
    // The first five structure equations are linear in Ω₁..Ω₅ alone; the next
    // six couple Ω₆, Ω₇ with the a/b/c/e curvature family; the last three
    // read off the rest.
    state.solve_stage(&[0, 1, 2, 3, 4], &[1, 2, 3, 4, 5], &[], "A")?;
    state.solve_stage(
        &[5, 6, 7, 8, 9, 10],
        &[6, 7],
        &ci(&[
            "a1", "a2", "a3", "a4", "a5", "b1", "b2", "b3", "b4", "c1", "c2", "c3", "e1", "e2",
        ]),
        "B",
    )?;
    state.solve_stage(
        &[11, 12, 13],
        &[],
        &ci(&["f", "q1", "q2", "p1", "p2", "p3", "h1", "h2", "h3", "h4"]),
        "C",
    )?;

    let mut curvature: BTreeMap<String, RatExpr> = BTreeMap::new();
    for (idx, name) in CURVATURE_NAMES.iter().enumerate() {
        curvature.insert(
            name.to_string(),
            state
                .curvature
                .get(&idx)
                .cloned()
                .unwrap_or_else(|| RatExpr::zero(&chart)),
        );
    }
    let forms = ConnectionForms {
        omega_theta: state
            .omega_theta
            .iter()
            .map(|o| o.clone().expect("all connection forms solved"))
            .collect(),
        omega: state
            .omega
            .iter()
            .map(|o| o.clone().expect("all connection forms solved"))
            .collect(),
        solution_space_dim: state.freedom,
    };
    let coeffs = CurvatureCoefficients { values: curvature };
    verify_full_residual(cf, &forms, &coeffs)?;
    Ok((forms, coeffs))
}

/// Re-assemble all fourteen structure equations with the solved data and
/// assert that every residual is exactly zero.
fn verify_full_residual(
    cf: &CoframeFamily,
    forms: &ConnectionForms,
    coeffs: &CurvatureCoefficients,
) -> Result<(), TwistorError> {
    let eqs = equations();
    for eq in &eqs {
        let lhs = if eq.lhs < 7 {
            cf.theta[eq.lhs].d()
        } else {
            forms.omega[eq.lhs - 7].d()
        };
        let mut rhs = DiffForm::zero(&charts::m7(), 2);
        for (tb, oi, coeff) in &eq.theta_omega {
            rhs = rhs.add(&cf.theta[*tb].wedge(&forms.omega[*oi - 1])?.scale_rat(coeff));
        }
        for (oi, oj, coeff) in &eq.omega_omega {
            rhs = rhs.add(
                &forms.omega[*oi - 1]
                    .wedge(&forms.omega[*oj - 1])?
                    .scale_rat(coeff),
            );
        }
        for (tb, tc, coeff) in &eq.theta_theta {
            rhs = rhs.add(&cf.theta[*tb].wedge(&cf.theta[*tc])?.scale_rat(coeff));
        }
        for ((b, c), parts) in &eq.curvature {
            let mut factor = RatExpr::zero(&charts::m7());
            for (ci, coeff) in parts {
                factor = factor
                    .add_ref(&coeffs.values[CURVATURE_NAMES[*ci]].mul_rat(coeff));
            }
            if !factor.is_zero() {
                rhs = rhs.add(&cf.theta[*b].wedge(&cf.theta[*c])?.scale(&factor));
            }
        }
        if !lhs.sub(&rhs).is_zero() {
            return Err(TwistorError::Inconsistent(format!(
                "equation for index {} has nonzero residual",
                eq.lhs
            )));
        }
    }
    let _ = slot_index(0, 1);
    Ok(())
}

/// Assemble the Cartan connection matrix in the printed pattern (the matrix
/// model with θ⁰..θ⁶ in the b-slots and Ω₁..Ω₇ in the q-slots) and return
/// its curvature dω + ω∧ω as a 7×7 matrix of 2-forms.
///
/// The q³-slot carries ½Ω₃: the Maurer–Cartan equations of the matrix
/// pattern and the printed structure equations pin their relative
/// normalizations, and the Ω₃ used by the structure equations is twice the
/// matrix entry (every other slot matches with factor one).
pub fn cartan_curvature_matrix(
    cf: &CoframeFamily,
    forms: &ConnectionForms,
) -> Result<Vec<Vec<DiffForm>>, TwistorError> {
    let chart = charts::m7();
    let mut omega_mat: Vec<Vec<DiffForm>> =
        vec![vec![DiffForm::zero(&chart, 1); 7]; 7];
    let q3_slot = G2_PARAM_NAMES.iter().position(|n| *n == "q3").unwrap();
    for (pi, placement) in G2_PLACEMENTS_PUBLIC.iter().enumerate() {
        let form = if pi < 7 {
            cf.theta[pi].clone()
        } else if pi == q3_slot {
            forms.omega[pi - 7].scale_rat(&rat(1, 2))
        } else {
            forms.omega[pi - 7].clone()
        };
        for &(r, c, num, den) in placement.iter() {
            omega_mat[r - 1][c - 1] =
                omega_mat[r - 1][c - 1].add(&form.scale_rat(&rat(num, den)));
        }
    }
    let mut curv = vec![vec![DiffForm::zero(&chart, 2); 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            let mut k = omega_mat[i][j].d();
            for l in 0..7 {
                k = k.add(&omega_mat[i][l].wedge(&omega_mat[l][j])?);
            }
            curv[i][j] = k;
        }
    }
    Ok(curv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rint;
    use crate::twistor::coframe::build_theta_coframe;

    #[test]
    fn flat_case_has_zero_curvature() {
        let cf = build_theta_coframe(&rint(2)).unwrap();
        let (forms, coeffs) = solve_connection_forms(&cf).unwrap();
        assert!(coeffs.all_zero(), "nonzero: {:?}", coeffs.nonzero_names());
        assert_eq!(forms.solution_space_dim, 0);
        let curv = cartan_curvature_matrix(&cf, &forms).unwrap();
        for row in &curv {
            for k in row {
                assert!(k.is_zero(), "Cartan curvature entry nonzero");
            }
        }
    }
}

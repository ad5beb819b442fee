use g2twistor::geomcalc::VectorField;
use g2twistor::scalar::{charts, parse_scalar, Bindings, RatExpr};
use g2twistor::twistor::fixtures::fixtures;
use g2twistor::twistor::{verify_symmetry, SymmetryKind};

// Push each printed generator through x0 -> x0 - 3 x2 x3 (whose inverse is
// x0 -> x0 + 3 x2 x3) and verify against (la1, up1).
#[test]
fn diag_shifted_generators() {
    let b = Bindings::new();
    let f = fixtures();
    let a5 = charts::a5();
    let lambda = f.one_form("la1", &b).unwrap();
    let upsilon = f.sym_tensor("up1", &b).unwrap();
    let kind = SymmetryKind::G2Contact { lambda: &lambda, upsilon: &upsilon, solve_var: "x0" };
    // substitution x0 -> x0 + 3 x2 x3 applied to a coefficient
    let shift: Vec<RatExpr> = (0..5).map(|i| {
        if i == 0 { parse_scalar("x0 - 3*x2*x3", &a5, &b).unwrap() }
        else { RatExpr::var_index(&a5, i) }
    }).collect();
    let x2 = RatExpr::var(&a5, "x2").unwrap();
    let x3 = RatExpr::var(&a5, "x3").unwrap();
    let three = RatExpr::from_int(&a5, 3);
    for i in 1..=14 {
        let g = f.vector_field(&format!("G{i}"), &b).unwrap();
        let a0 = &g.comps[0]; let a2 = &g.comps[2]; let a3 = &g.comps[3];
        let new0 = a0.add_ref(&three.mul_ref(&x3).mul_ref(a2)).add_ref(&three.mul_ref(&x2).mul_ref(a3));
        let mut comps: Vec<RatExpr> = g.comps.clone();
        comps[0] = new0;
        let comps: Vec<RatExpr> = comps.iter().map(|c| c.substitute(&a5, &shift).unwrap()).collect();
        let gt = VectorField::from_comps(&a5, comps);
        let v = verify_symmetry(&gt, &kind).unwrap();
        println!("G{i}': {}", if v.passed() { "pass" } else { "FAIL" });
    }
}

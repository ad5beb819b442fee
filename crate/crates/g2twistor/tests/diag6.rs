use g2twistor::scalar::Bindings;
use g2twistor::twistor::fixtures::fixtures;
use g2twistor::twistor::{verify_symmetry, SymmetryKind};

#[test]
fn diag_g2contact_generators() {
    let b = Bindings::new();
    let f = fixtures();
    let lambda = f.one_form("la1", &b).unwrap();
    let upsilon = f.sym_tensor("up1", &b).unwrap();
    let kind = SymmetryKind::G2Contact { lambda: &lambda, upsilon: &upsilon, solve_var: "x0" };
    for i in 1..=14 {
        let g = f.vector_field(&format!("G{i}"), &b).unwrap();
        let v = verify_symmetry(&g, &kind).unwrap();
        println!("G{i}: {}", if v.passed() { "pass" } else { "FAIL" });
    }
}

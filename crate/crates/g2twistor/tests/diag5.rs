use g2twistor::geomcalc::ChartMap;
use g2twistor::scalar::{charts, rint, Bindings, RatExpr};
use g2twistor::twistor::{build_contact_data, fixtures::fixtures};

#[test]
fn diag_adapted_upsilon() {
    let k = rint(2);
    let data = build_contact_data(&k).unwrap();
    let b = data.coframe.backend.bindings();
    let f = fixtures();
    let printed = f.sym_tensor("upsilon2_printed", &b).unwrap();
    let b6 = charts::b6();
    let m7 = charts::m7();
    let mut assignment: Vec<RatExpr> = b6.vars().iter().map(|v| RatExpr::var(&b6, v).unwrap()).collect();
    assignment.push(RatExpr::zero(&b6));
    let incl = ChartMap::new(&b6, &m7, assignment);
    let ups0 = incl.pullback_sym(&printed).unwrap();
    let adapted = f.chart_map("adapted", &Bindings::new()).unwrap();
    let ups_a6 = adapted.pullback_sym(&ups0).unwrap();
    let a6 = charts::a6();
    println!("adapted Upsilon0 terms:");
    for (m, c) in &ups_a6.terms {
        let names: Vec<String> = (0..6).flat_map(|i| std::iter::repeat(format!("d{}", a6.var_name(i))).take(m[i] as usize)).collect();
        println!("  {} : {}", names.join("*"), c);
    }
}

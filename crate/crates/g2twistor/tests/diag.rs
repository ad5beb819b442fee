#[test]
fn diag_upsilon_printed() {
    use g2twistor::geomcalc::SymTensor;
    use g2twistor::scalar::{charts, rint, RatExpr};
    use g2twistor::twistor::{build_contact_data, fixtures::fixtures};
    let data = build_contact_data(&rint(2)).unwrap();
    let c = charts::m7();
    let printed = fixtures().sym_tensor("upsilon2_printed", &data.coframe.backend.bindings()).unwrap();
    // Restrict assembled to ker lambda by eliminating dz.
    let v = c.index_of("z").unwrap();
    let mut repl = SymTensor::zero(&c);
    for (m, coeff) in &data.lambda.terms {
        let i = (*m).trailing_zeros() as usize;
        if i == v { continue; }
        let mut mono = vec![0u8; 7];
        mono[i] = 1;
        repl.insert_add(mono, coeff.neg_ref());
    }
    let r1 = data.upsilon.eliminate("z", &repl).unwrap();
    // factor from the dv^2 dy^2 monomial (coefficient -9 in print).
    let mut key = vec![0u8;7]; key[1] = 2; key[5] = 2;
    let f = r1.terms.get(&key).unwrap().div_ref(&RatExpr::from_int(&c, -9));
    let scaled = r1.scale(&f.inv());
    let diff = scaled.sub(&printed);
    println!("factor = {}", f);
    println!("diff terms: {}", diff.terms.len());
    for (m, coeff) in diff.terms.iter() {
        let names: Vec<String> = (0..7).flat_map(|i| std::iter::repeat(format!("d{}", c.var_name(i))).take(m[i] as usize)).collect();
        let p = printed.terms.get(m).map(|x| format!("{x}")).unwrap_or("0".into());
        let s = scaled.terms.get(m).map(|x| format!("{x}")).unwrap_or("0".into());
        println!("{}: printed {} should be {}", names.join("*"), p, s);
    }
}

use g2twistor::geomcalc::DiffForm;
use g2twistor::scalar::{charts, rint, Matrix, RatExpr};
use g2twistor::twistor::build_theta_coframe;

fn to_theta(form: &DiffForm, ninv: &Matrix<RatExpr>) -> Vec<((usize, usize), RatExpr)> {
    let chart = charts::m7();
    let mut out = Vec::new();
    for b in 0..7 {
        for c in (b + 1)..7 {
            let mut acc = RatExpr::zero(&chart);
            for (mask, coeff) in &form.terms {
                let mu = mask.trailing_zeros() as usize;
                let rest = mask & !(1 << mu);
                let nu = rest.trailing_zeros() as usize;
                let t = ninv.at(mu, b).mul_ref(ninv.at(nu, c))
                    .sub_ref(&ninv.at(mu, c).mul_ref(ninv.at(nu, b)));
                acc = acc.add_ref(&coeff.mul_ref(&t));
            }
            if !acc.is_zero() {
                out.push(((b, c), acc));
            }
        }
    }
    out
}

#[test]
fn diag_dtheta_pattern() {
    let cf = build_theta_coframe(&rint(2)).unwrap();
    let chart = charts::m7();
    let mut m = Matrix::filled(7, 7, RatExpr::zero(&chart));
    for (a, t) in cf.theta.iter().enumerate() {
        for (mask, c) in &t.terms {
            let mu = mask.trailing_zeros() as usize;
            *m.at_mut(a, mu) = c.clone();
        }
    }
    let minv = m.inverse().unwrap();
    for a in 0..7 {
        let comps = to_theta(&cf.theta[a].d(), &minv);
        let s: Vec<String> = comps.iter().map(|((b, c), v)| format!("({b},{c})={v}")).collect();
        println!("dtheta{a}: {}", s.join("  "));
    }
}

// Derive the Maurer-Cartan equations of the matrix pattern symbolically:
// symbols 0..6 = theta0..theta6, 7..13 = Omega1..Omega7.
use g2twistor::liealg::models::G2_PLACEMENTS_PUBLIC;
use g2twistor::scalar::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

type Two = BTreeMap<(usize, usize), Rat>;

fn add2(m: &mut Two, i: usize, j: usize, c: Rat) {
    if i == j || c.is_zero() { return; }
    let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
    let e = m.entry(key).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() { m.remove(&key); }
}

fn name(s: usize) -> String {
    if s < 7 { format!("th{}", s) } else { format!("Om{}", s - 6) }
}

#[test]
fn diag_mc_equations() {
    // omega[i][j] = list of (symbol, coeff)
    let mut entries: Vec<Vec<Vec<(usize, Rat)>>> = vec![vec![Vec::new(); 7]; 7];
    for (sym, placement) in G2_PLACEMENTS_PUBLIC.iter().enumerate() {
        for &(r, c, n, d) in placement.iter() {
            entries[r - 1][c - 1].push((sym, rat(n, d)));
        }
    }
    // omega wedge omega entries.
    let mut rhs: Vec<Vec<Two>> = vec![vec![Two::new(); 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            let mut acc = Two::new();
            for l in 0..7 {
                for &(s1, ref c1) in &entries[i][l] {
                    for &(s2, ref c2) in &entries[l][j] {
                        add2(&mut acc, s1, s2, c1.clone() * c2);
                    }
                }
            }
            rhs[i][j] = acc;
        }
    }
    // Solve d(sym): for each symbol pick the first entry where it appears alone-ish.
    // General: build linear system sum_sym coeff * d(sym) = -(omega^2)_{ij}.
    // We exploit that each entry has at most 2 symbols, and symbols q1,q4 are
    // resolvable from entries (3,3) [-q1] and (2,2) [-q4].
    let mut dsym: Vec<Option<Two>> = vec![None; 14];
    for _pass in 0..3 {
        for i in 0..7 {
            for j in 0..7 {
                let syms = &entries[i][j];
                let unknown: Vec<usize> = syms.iter().filter(|(s, _)| dsym[*s].is_none()).map(|(s, _)| *s).collect();
                if unknown.len() != 1 { continue; }
                let u = unknown[0];
                // c_u * d(u) = -(w^2)_{ij} - sum_known c_s d(s)
                let mut target: Two = Two::new();
                for (k, v) in &rhs[i][j] { add2(&mut target, k.0, k.1, -v.clone()); }
                let mut cu = Rat::zero();
                for (s, c) in syms {
                    if *s == u { cu = c.clone(); continue; }
                    let known = dsym[*s].clone().unwrap();
                    for ((a, b), v) in known { add2(&mut target, a, b, -(v * c)); }
                }
                let inv = Rat::from_integer(1.into()) / cu;
                let mut res = Two::new();
                for ((a, b), v) in target { add2(&mut res, a, b, v * &inv); }
                dsym[u] = Some(res);
            }
        }
    }
    for s in 0..14 {
        let d = dsym[s].clone().expect("resolved");
        let mut parts: Vec<String> = Vec::new();
        for ((a, b), v) in d {
            parts.push(format!("{}*{}^{}", v, name(a), name(b)));
        }
        println!("d({}) = {}", name(s), parts.join(" + "));
    }
}

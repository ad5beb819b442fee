use g2twistor::scalar::rint;
use g2twistor::twistor::{build_theta_coframe, solve_connection_forms};
use g2twistor::twistor::connection::cartan_curvature_matrix;

#[test]
fn diag_cartan_entries() {
    let cf = build_theta_coframe(&rint(2)).unwrap();
    let (forms, coeffs) = solve_connection_forms(&cf).unwrap();
    println!("curvature all zero: {}", coeffs.all_zero());
    println!("freedom: {}", forms.solution_space_dim);
    let curv = cartan_curvature_matrix(&cf, &forms).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            if !curv[i][j].is_zero() {
                println!("K[{}][{}] != 0 ({} terms)", i + 1, j + 1, curv[i][j].terms.len());
            }
        }
    }
}

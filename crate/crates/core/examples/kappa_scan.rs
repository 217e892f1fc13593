//! Sampled lower bounds for the curvature of several orbit spaces.

use orbit_curvature::actions::{hopf, sp1_h_imh, spm_u1, u1_weights, u2_c4};
use orbit_curvature::oneill::kappa_scan;

fn main() {
    let actions = vec![
        hopf(),
        u1_weights(&[2, 1], 1).expect("weights"),
        sp1_h_imh(),
        u2_c4(),
        spm_u1(1, 1, 0).expect("weights"),
    ];
    for action in &actions {
        let report = kappa_scan(action, 300, 10, 0, true).expect("scan");
        println!(
            "{:<16} regular {:>3}/{}  K in [{:.6}, {:.6}]",
            report.action,
            report.n_regular,
            report.n_points,
            report.min.unwrap_or(f64::NAN),
            report.max.unwrap_or(f64::NAN)
        );
    }
}

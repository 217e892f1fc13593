//! SU(2) on C^2 + R^3: the orbit space is a warped product dr^2 + f(r)^2 ds^2
//! of an interval with the round S^2.

use std::f64::consts::FRAC_PI_2;

use orbit_curvature::actions::sp1_h_imh;
use orbit_curvature::closedform::{c2r3_f, c2r3_radial_closed, c2r3_ranges, richardson};
use orbit_curvature::oneill::kappa_scan;

fn main() {
    let grid: Vec<f64> = (1..=2000).map(|i| FRAC_PI_2 * i as f64 / 2001.0).collect();
    let ranges = c2r3_ranges(&grid);
    println!("-f''/f in [{:.6}, {:.6}]", ranges.radial.min, ranges.radial.max);
    println!("(1 - f'^2)/f^2 >= {:.6}", ranges.spherical.min);

    let at = |r: f64| c2r3_f(r).radial_curvature();
    let near0 = richardson(at(1e-3), 1e-3, at(1e-4), 1e-4, 2);
    let near_end = richardson(at(FRAC_PI_2 - 1e-3), 1e-3, at(FRAC_PI_2 - 1e-4), 1e-4, 2);
    println!("extrapolated: r -> 0 gives {near0:.9}, r -> pi/2 gives {near_end:.9}");
    println!("closed form at the ends: {} and {}", c2r3_radial_closed(0.0), c2r3_radial_closed(FRAC_PI_2));

    let scan = kappa_scan(&sp1_h_imh(), 500, 10, 1, true).expect("scan");
    println!("sampled horizontal planes: min K = {:.6}", scan.min.unwrap_or(f64::NAN));
}

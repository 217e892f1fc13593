//! SU(2) acting on H^2 through Sym^3: the curvature of i_R^h ^ j_R^h along
//! the normal geodesic, and the point t0 where it equals 1.

use std::f64::consts::FRAC_PI_6;

use orbit_curvature::actions::su2_geodesic;
use orbit_curvature::closedform::{grid, su2_k_ij, t0, t0_numeric};
use orbit_curvature::numkern::RANK_TOL;
use orbit_curvature::oneill::{frame_at, plane_curvature};
use orbit_curvature::thorpe::{lifted_frame, su2_action};

fn main() {
    let t0_root = t0_numeric(1e-14).expect("bracketed root");
    println!("t0 = {:.15} (root finder {:.15})", t0(), t0_root);
    println!("K(t0) - 1 = {:.2e}", su2_k_ij(t0()) - 1.0);

    let action = su2_action();
    for t in grid(0.0, FRAC_PI_6, 10, 1e-3) {
        let f = lifted_frame(t).expect("frame");
        let frame = frame_at(&action, &su2_geodesic(t), RANK_TOL).expect("regular");
        let engine = plane_curvature(&action, &frame, &f[1], &f[2]).expect("plane").value;
        println!("t = {t:.5}  K = {:.12}  engine residual {:.1e}", su2_k_ij(t), (engine - su2_k_ij(t)).abs());
    }
}

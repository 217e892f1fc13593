//! SO(3) on the real form of Sym^6(C^2): a geodesic orthogonal to two
//! exceptional orbits, which the improved lemma turns into an elimination.

use orbit_curvature::eliminator::{builtin_catalog, check_improvedlem, so3_geodesic_witness};

fn main() {
    let w = so3_geodesic_witness();
    println!("|alpha|^2 = {:.12}", w.alpha_sq);
    println!("<q, T_p Gp> residual {:.2e}, cos(p, q) = {:.6}", w.tangent_residual, w.cos_pq);
    println!("orbit dims at p, q: {:?}, at the midpoint: {}", w.orbit_dims, w.midpoint_orbit_dim);

    let so3 = builtin_catalog().into_iter().find(|c| c.action.as_deref() == Some("so3_sym6_real")).expect("catalog entry");
    let verdict = check_improvedlem(&so3);
    println!("{}: {:?} ({})", verdict.rule, verdict.outcome, verdict.arithmetic());
}

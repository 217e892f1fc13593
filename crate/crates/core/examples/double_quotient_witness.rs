//! Curvature-one planes of S^11 under Sp(1) x Sp(1), seen through the left
//! and right Sp(1) submersions at the singular point e1^5.

use orbit_curvature::eliminator::{double_quotient_witness, PlaneWitness};

fn show(label: &str, w: &PlaneWitness) {
    let [a, b] = w.monomials;
    println!("{label}: e1^{} e2^{a} ^ e1^{} e2^{b}", 5 - a, 5 - b);
    println!("  |A| left {:.3e}  right {:.3e}  totally real {}", w.a_left, w.a_right, w.totally_real.holds);
    for s in &w.approach {
        println!("  distance {:.1e}  vertical dim {}  K {:.12}", s.distance, s.vertical_dim, s.curvature);
    }
}

fn main() {
    let w = double_quotient_witness().expect("witness");
    println!("left orbit dim at e1^5: {}", w.left_orbit_dim);
    show("stated plane", &w.stated);
    show("corrected plane", &w.corrected);
}

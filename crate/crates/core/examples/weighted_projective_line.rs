//! Weighted projective lines: closed-form K(r) against the O'Neill engine.

use std::f64::consts::FRAC_PI_2;

use orbit_curvature::actions::u1_weights;
use orbit_curvature::closedform::{wcp1_k, WCP1Params};
use orbit_curvature::numkern::{Vector, RANK_TOL};
use orbit_curvature::oneill::{frame_at, plane_curvature};

fn main() {
    for (a, b) in [(1, 1), (2, 1), (3, 2), (5, 1)] {
        let params = WCP1Params::new(a, b).expect("coprime weights");
        let action = u1_weights(&[a as i64, b as i64], 1).expect("nonzero weights");
        println!("weights ({a}, {b}): K ranges over ({}, {})", params.k_inf(), params.k_sup());
        let mut worst = 0.0f64;
        for i in 1..=8 {
            let r = FRAC_PI_2 * i as f64 / 9.0;
            let p = Vector::from_vec(vec![r.cos(), 0.0, r.sin(), 0.0]);
            let frame = frame_at(&action, &p, RANK_TOL).expect("regular point");
            let h = &frame.horizontal_basis;
            let engine = plane_curvature(&action, &frame, &h[0], &h[1]).expect("plane").value;
            let closed = wcp1_k(params, r).expect("r in range");
            worst = worst.max((engine - closed).abs());
            println!("  r = {r:.4}  K = {closed:.12}  engine {engine:.12}");
        }
        println!("  max |engine - closed| = {worst:.2e}");
    }
}

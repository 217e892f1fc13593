use std::f64::consts::{FRAC_PI_2, TAU};

use orbit_curvature::actions::{builtin_actions, hopf, sp1_h_imh, u1_weights, u2_c4, SphereAction};
use orbit_curvature::closedform::{wcp1_k, WCP1Params};
use orbit_curvature::numkern::{expm, Sampler, Vector, RANK_TOL};
use orbit_curvature::oneill::{a_tensor, frame_at, plane_curvature, TangentFrame};
use proptest::prelude::*;

fn horizontal_pair(frame: &TangentFrame, s: &Sampler, i: u64) -> Option<(Vector, Vector)> {
    let dim = frame.p.len();
    let u = frame.horizontal_part(&s.gaussian(dim, 2 * i));
    let v = frame.horizontal_part(&s.gaussian(dim, 2 * i + 1));
    let wedge = u.norm_squared() * v.norm_squared() - u.dot(&v).powi(2);
    (wedge > 1e-6).then_some((u, v))
}

fn actions() -> Vec<SphereAction> {
    builtin_actions()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn a_tensor_is_antisymmetric_and_curvature_at_least_one(which in 0usize..10, seed in any::<u64>()) {
        let all = actions();
        let action = &all[which % all.len()];
        let s = Sampler::new(seed);
        let p = s.unit_vector(action.ambient_dim, 1_000);
        let Ok(frame) = frame_at(action, &p, RANK_TOL) else { return Ok(()) };
        let Some((u, v)) = horizontal_pair(&frame, &s, 0) else { return Ok(()) };
        let uv = a_tensor(action, &frame, &u, &v).unwrap();
        let vu = a_tensor(action, &frame, &v, &u).unwrap();
        prop_assert!((&uv + &vu).amax() < 1e-10 * uv.amax().max(1.0));
        let k = plane_curvature(action, &frame, &u, &v).unwrap();
        prop_assert!(k.value >= 1.0 - 1e-9);
        prop_assert!((k.value - 1.0 - 3.0 * k.a_norm_sq).abs() < 1e-12 * k.value);
        // A_u v is vertical.
        prop_assert!(frame.horizontal_part(&uv).amax() < 1e-9 * uv.amax().max(1.0));
    }

    #[test]
    fn curvature_is_equivariant(which in 0usize..3, gen in 0usize..4, s_param in -1.0f64..1.0, seed in any::<u64>()) {
        let action = [hopf(), sp1_h_imh(), u2_c4()][which].clone();
        let z = &action.generators[gen % action.generators.len()];
        let g = expm(&(z * s_param));
        let s = Sampler::new(seed);
        let p = s.unit_vector(action.ambient_dim, 7);
        let Ok(frame) = frame_at(&action, &p, RANK_TOL) else { return Ok(()) };
        let Some((u, v)) = horizontal_pair(&frame, &s, 3) else { return Ok(()) };
        let k = plane_curvature(&action, &frame, &u, &v).unwrap().value;
        let gframe = frame_at(&action, &(&g * &p), RANK_TOL).unwrap();
        let gk = plane_curvature(&action, &gframe, &(&g * &u), &(&g * &v)).unwrap().value;
        prop_assert!((k - gk).abs() < 1e-8 * k.max(1.0), "{} vs {}", k, gk);
    }

    #[test]
    fn engine_matches_weighted_projective_line(pair in 0usize..4, r in 0.01f64..(FRAC_PI_2 - 0.01), phase in 0.0f64..TAU, seed in any::<u64>()) {
        let (a, b) = [(1, 1), (2, 1), (3, 2), (5, 1)][pair];
        let action = u1_weights(&[a, b], 1).unwrap();
        let params = WCP1Params::new(a as u32, b as u32).unwrap();
        let x = Vector::from_vec(vec![r.cos() * phase.cos(), r.cos() * phase.sin(), r.sin(), 0.0]);
        let frame = frame_at(&action, &x, RANK_TOL).unwrap();
        let Some((u, v)) = horizontal_pair(&frame, &Sampler::new(seed), 0) else { return Ok(()) };
        let k = plane_curvature(&action, &frame, &u, &v).unwrap().value;
        let closed = wcp1_k(params, r).unwrap();
        prop_assert!((k - closed).abs() < 1e-8 * closed);
    }
}

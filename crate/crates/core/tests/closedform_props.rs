use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, TAU};

use orbit_curvature::closedform::{c2r3_f, t0, wcp1_k, wcp1_k_prime, wcp1_metric_coeff, WCP1Params};
use orbit_curvature::thorpe::{circle_point, operator_at, Branch, T0_EXCLUSION};
use proptest::prelude::*;

fn away_from_t0() -> impl Strategy<Value = f64> {
    (1e-3f64..FRAC_PI_6 - 1e-3).prop_filter("t0 window", |t| (t - t0()).abs() > 10.0 * T0_EXCLUSION)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn warp_derivatives_match_differences(r in 0.05f64..(FRAC_PI_2 - 0.05)) {
        let h = 1e-5;
        let (m, w, p) = (c2r3_f(r - h), c2r3_f(r), c2r3_f(r + h));
        prop_assert!(((p.f - m.f) / (2.0 * h) - w.df).abs() < 1e-8);
        prop_assert!(((p.df - m.df) / (2.0 * h) - w.d2f).abs() < 1e-7);
        prop_assert!(((p.f - 2.0 * w.f + m.f) / (h * h) - w.d2f).abs() < 1e-4);
    }

    #[test]
    fn wcp1_curvature_from_metric(pair in 0usize..4, r in 0.1f64..1.4) {
        let (a, b) = [(1, 1), (2, 1), (3, 2), (5, 1)][pair];
        let p = WCP1Params::new(a, b).unwrap();
        let h = 1e-4;
        let root = |x: f64| wcp1_metric_coeff(p, x).unwrap().sqrt();
        let fd = -(root(r + h) - 2.0 * root(r) + root(r - h)) / (h * h) / root(r);
        let k = wcp1_k(p, r).unwrap();
        prop_assert!(((fd - k) / k).abs() < 1e-6);
        let dk = (wcp1_k(p, r + h).unwrap() - wcp1_k(p, r - h).unwrap()) / (2.0 * h);
        prop_assert!((dk - wcp1_k_prime(p, r).unwrap()).abs() < 1e-5 * dk.abs().max(1.0));
    }

    #[test]
    fn operator_is_symmetric_with_traceless_b(t in away_from_t0()) {
        let op = operator_at(t).unwrap();
        let m = op.matrix();
        prop_assert!((&m - m.transpose()).amax() < 1e-12);
        prop_assert!(op.trace_b().abs() < 1e-10);
        for i in 0..6 {
            prop_assert!(m[(i, i)] >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn circle_points_lie_on_the_grassmannian(t in away_from_t0(), theta in 0.0f64..TAU, plus in any::<bool>()) {
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let p = circle_point(t, theta, branch).unwrap();
        prop_assert!(p.plucker().abs() < 1e-10);
        prop_assert!(p.normalization().abs() < 1e-10);
        prop_assert!(p.self_wedge().abs() < 1e-10);
    }
}

use orbit_curvature::eliminator::{
    builtin_catalog, catalog_action, evaluate, measure_orbit_data, BoundFamily, Candidate, Codim, CodimKind, Field,
};
use proptest::prelude::*;

fn candidate() -> impl Strategy<Value = Candidate> {
    (1u32..60, 1u32..8, 3u32..200, 0usize..3, any::<bool>(), 0usize..5, 0u32..20, any::<bool>())
        .prop_filter_map("valid", |(g, k, n, field, irreducible, bound, extra, lifted)| {
            let k = k.min(g);
            let m = n.saturating_sub(g.min(n - 1)).max(1);
            let field = [Field::Real, Field::Complex, Field::Quaternionic][field];
            let mut c = Candidate::new("random", g, k, n, m, field);
            c.irreducible = irreducible;
            c.min_orbit_dim = Some(extra.min(n - m));
            c.orbit_dims = vec![extra.min(n - m), (extra / 2).min(n - m)];
            c.bound = match bound {
                0 => None,
                1 => Some(BoundFamily::Real),
                2 => Some(BoundFamily::Complex { g_prime: g, k_prime: k }),
                3 => Some(BoundFamily::Quaternionic { g_prime: g, k_prime: k }),
                _ => Some(BoundFamily::QuaternionicTensor { g2: g, k2: k, s: 1 + extra / 4 }),
            };
            let kind = if lifted { CodimKind::Lifted } else { CodimKind::Projective };
            c.codim = Some(Codim { value: extra, kind, s: Some(1 + extra / 3) });
            c.validate().ok().map(|_| c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdicts_reevaluate_to_their_outcome(c in candidate()) {
        let report = evaluate(&c).unwrap();
        for v in &report.verdicts {
            prop_assert!(v.consistent(), "{:?}", v);
            for check in &v.checks {
                prop_assert!(check.holds(), "{:?}", check);
            }
        }
        prop_assert_eq!(report.eliminated, report.verdicts.iter().any(|v| v.eliminated()));
    }
}

#[test]
fn catalog_orbit_data_matches_measurement() {
    for c in builtin_catalog() {
        let Some(name) = c.action.as_deref() else { continue };
        let (action, special) = catalog_action(name).unwrap();
        let d = measure_orbit_data(&action, &special, 200, 0);
        assert_eq!(d.n, c.n, "{name}: n");
        assert_eq!(d.m, c.m, "{name}: m");
        if let Some(min) = c.min_orbit_dim {
            assert_eq!(d.min_dim, min, "{name}: smallest orbit");
        }
    }
}

//! One line per acceptance criterion. Criteria listed in `KNOWN_RED` are
//! expected to fail as stated; the run fails if any of them passes or any
//! other criterion fails. The README explains the known failure.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

use orbit_curvature::actions::{builtin_actions, sp1_h_imh, sp1_right_h2, spm_u1, su2_geodesic, u1_weights};
use orbit_curvature::closedform::{
    a1, a2, a3, b1, b2, b3, c1, c2, c3, c2r3_f, eq54_evaluation_intervals, eq54_lhs, eq54_rhs, eq54_zeros, grid, i0,
    i_horizontal_sq, i_left_norm_sq, richardson, su2_k_ij, t0, t0_numeric, thorpe_identities, wcp1_k, wcp1_k_monotone,
    wcp1_metric_coeff, MonotoneReport, WCP1Params,
};
use orbit_curvature::eliminator::{builtin_catalog, check_improvedlem, double_quotient_witness, run_catalog, so3_geodesic_witness};
use orbit_curvature::numkern::{Vector, RANK_TOL};
use orbit_curvature::oneill::{frame_at, kappa_scan, plane_curvature};
use orbit_curvature::thorpe::{lifted_frame, su2_action, thorpe_audit, AuditTolerances};

const KNOWN_RED: [usize; 1] = [7];

thread_local! {
    static MIN_CURVATURE: Cell<f64> = const { Cell::new(f64::INFINITY) };
}

fn record(k: f64) -> f64 {
    MIN_CURVATURE.with(|m| m.set(m.get().min(k)));
    k
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_over(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let mut fd_rel = 0.0f64;
    let mut ends = 0.0f64;
    let mut ok_monotone = true;
    let mut constant_dev = 0.0;
    for (a, b) in [(1, 1), (2, 1), (3, 2), (5, 1)] {
        let p = WCP1Params::new(a, b).unwrap();
        // K = -(sqrt g)'' / sqrt g for dr^2 + g dtheta^2, by central differences.
        let h = 1e-4;
        let root = |r: f64| wcp1_metric_coeff(p, r).unwrap().sqrt();
        for r in grid(0.1, 1.4, 200, 0.0) {
            let fd = -(root(r + h) - 2.0 * root(r) + root(r - h)) / (h * h) / root(r);
            let k = wcp1_k(p, r).unwrap();
            fd_rel = fd_rel.max(((fd - k) / k).abs());
        }
        ends = ends
            .max((wcp1_k(p, 1e-5).unwrap() - p.k_inf()).abs())
            .max((wcp1_k(p, FRAC_PI_2 - 1e-5).unwrap() - p.k_sup()).abs());
        match wcp1_k_monotone(p, 1000).unwrap() {
            MonotoneReport::Constant { max_deviation, .. } => constant_dev = max_deviation,
            MonotoneReport::Increasing { .. } => {}
            MonotoneReport::NotMonotone { .. } => ok_monotone = false,
        }
    }
    outcome(
        fd_rel < 1e-6 && ends < 1e-6 && constant_dev < 1e-12 && ok_monotone,
        format!("fd rel {fd_rel:.1e} < 1e-6, ends {ends:.1e} < 1e-6, (1,1) deviation {constant_dev:.1e} < 1e-12, increasing {ok_monotone}"),
    )
}

fn criterion_2() -> Outcome {
    let action = u1_weights(&[2, 1], 1).unwrap();
    let p = WCP1Params::new(2, 1).unwrap();
    let worst = max_over((1..=50).map(|i| {
        let r = FRAC_PI_2 * i as f64 / 51.0;
        let x = Vector::from_vec(vec![r.cos(), 0.0, r.sin(), 0.0]);
        let frame = frame_at(&action, &x, RANK_TOL).unwrap();
        let hb = &frame.horizontal_basis;
        let k = record(plane_curvature(&action, &frame, &hb[0], &hb[1]).unwrap().value);
        (k - wcp1_k(p, r).unwrap()).abs()
    }));
    outcome(worst < 1e-8, format!("max |engine - closed form| {worst:.1e} < 1e-8 at 50 points"))
}

fn criterion_3() -> Outcome {
    // Uniform grid plus geometric refinement towards both ends.
    let mut rs: Vec<f64> = grid(0.0, FRAC_PI_2, 4000, 1e-6);
    for k in 1..=40 {
        let d = 10f64.powf(-1.0 - 5.0 * k as f64 / 40.0);
        rs.push(d);
        rs.push(FRAC_PI_2 - d);
    }
    let radial = |r: f64| c2r3_f(r).radial_curvature();
    let spherical = |r: f64| c2r3_f(r).spherical_curvature();
    let extrapolate = |f: &dyn Fn(f64) -> f64, end: f64, dir: f64| {
        richardson(f(end + dir * 1e-3), 1e-3, f(end + dir * 1e-4), 1e-4, 2)
    };
    let lim = |f: &dyn Fn(f64) -> f64| [extrapolate(f, 0.0, 1.0), extrapolate(f, FRAC_PI_2, -1.0)];
    let (rl, sl) = (lim(&radial), lim(&spherical));
    let inf = rs.iter().map(|&r| radial(r)).chain(rl).fold(f64::INFINITY, f64::min);
    let sup = rs.iter().map(|&r| radial(r)).chain(rl).fold(f64::NEG_INFINITY, f64::max);
    let sinf = rs.iter().map(|&r| spherical(r)).chain(sl).fold(f64::INFINITY, f64::min);
    let scan = kappa_scan(&sp1_h_imh(), 2000, 20, 1, true).unwrap();
    let smin = record(scan.min.unwrap_or(f64::NAN));
    let ok = (inf - 1.75).abs() < 1e-3 && (sup - 13.0).abs() < 1e-3 && (sinf - 9.0).abs() < 1e-3 && (1.74..=1.85).contains(&smin);
    outcome(
        ok,
        format!("radial inf {inf:.6} (7/4), sup {sup:.6} (13), spherical inf {sinf:.6} (9), scan min {smin:.4} in [1.74, 1.85]"),
    )
}

/// <L_k gamma, R_k gamma>, |L_k gamma|^2 and |R_k^h|^2 computed from the generators.
fn engine_frame(t: f64, k: usize) -> (f64, f64, f64) {
    let p = su2_geodesic(t);
    let (left, right) = (su2_action(), sp1_right_h2());
    let (l, r) = (&left.generators[k] * &p, &right.generators[k] * &p);
    let frame = frame_at(&left, &p, RANK_TOL).unwrap();
    (l.dot(&r), l.norm_squared(), frame.horizontal_part(&r).norm_squared())
}

fn criterion_4() -> Outcome {
    let k_t0 = (su2_k_ij(t0()) - 1.0).abs();
    let root = (t0_numeric(1e-12).unwrap() - t0()).abs();
    let action = su2_action();
    let engine = max_over(grid(0.0, FRAC_PI_6, 20, 1e-3).into_iter().map(|t| {
        let f = lifted_frame(t).unwrap();
        let frame = frame_at(&action, &su2_geodesic(t), RANK_TOL).unwrap();
        let k = record(plane_curvature(&action, &frame, &f[1], &f[2]).unwrap().value);
        (k - su2_k_ij(t)).abs()
    }));
    let ts = grid(0.0, FRAC_PI_6, 200, 1e-3);
    let shift = |f: fn(f64) -> f64, g: fn(f64) -> f64, s: f64| {
        max_over(ts.iter().map(|&t| (f(t) - g(t + s)).abs() / g(t + s).abs().max(1.0)))
    };
    let engine_shift = |k: usize, pick: fn((f64, f64, f64)) -> f64, closed: fn(f64) -> f64| {
        max_over(ts.iter().map(|&t| (pick(engine_frame(t, k)) - closed(t + k as f64 * FRAC_PI_3)).abs()))
    };
    let identities = [
        ("j0", engine_shift(1, |x| x.0, i0)),
        ("k0", engine_shift(2, |x| x.0, i0)),
        ("J^2", engine_shift(1, |x| x.2, i_horizontal_sq)),
        ("a2", shift(a2, a1, FRAC_PI_3)),
        ("a3", shift(a3, a1, 2.0 * FRAC_PI_3)),
        ("b2", shift(b2, b1, FRAC_PI_3)),
        ("b3", shift(b3, b1, 2.0 * FRAC_PI_3)),
        ("c2", shift(c2, c1, FRAC_PI_3)),
        ("c3", shift(c3, c1, 2.0 * FRAC_PI_3)),
    ];
    // Sanity of the unshifted frame functions against the engine.
    let base = max_over(ts.iter().map(|&t| {
        let (x, n, h) = engine_frame(t, 0);
        (x - i0(t)).abs().max((n - i_left_norm_sq(t)).abs()).max((h - i_horizontal_sq(t)).abs())
    }));
    let worst = identities.iter().map(|x| x.1).fold(base, f64::max);
    let named: Vec<String> = identities.iter().map(|(n, v)| format!("{n} {v:.0e}")).collect();
    outcome(
        k_t0 < 1e-9 && root < 1e-10 && engine < 1e-8 && worst < 1e-10,
        format!(
            "|K(t0) - 1| {k_t0:.1e}, root {root:.1e}, engine {engine:.1e} < 1e-8, shifts [{}] < 1e-10",
            named.join(", ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let r = thorpe_identities(&grid(0.0, FRAC_PI_6, 400, 1e-3)).unwrap();
    let switch = (r.branch_switch - r.t0).abs();
    let eq54 = max_over(eq54_evaluation_intervals().iter().flat_map(|&(lo, hi)| {
        grid(lo, hi, 300, 1e-3).into_iter().map(|t| (eq54_lhs(t) - eq54_rhs(t)).abs())
    }));
    let zeros = eq54_zeros(0.0, 5.0 * FRAC_PI_6, 1e-13).unwrap();
    let expected = [FRAC_PI_6, FRAC_PI_3, 2.0 * FRAC_PI_3, 5.0 * FRAC_PI_6];
    let zeros_ok = zeros.len() == 4 && zeros.iter().zip(expected).all(|(z, e)| (z - e).abs() < 1e-8);
    outcome(
        r.trace_b < 1e-12 && r.square_identity_rel < 1e-8 && r.mu1_minus_vs_mu2_plus < 1e-9 && switch < 1e-6 && eq54 < 1e-10 && zeros_ok,
        format!(
            "trace {:.1e}, square {:.1e}, mu {:.1e}, switch - t0 {switch:.1e}, eq {eq54:.1e}, zeros {zeros:?}",
            r.trace_b, r.square_identity_rel, r.mu1_minus_vs_mu2_plus
        ),
    )
}

fn criterion_6() -> Outcome {
    let tol = AuditTolerances::default();
    let a = thorpe_audit(200, 64, tol).unwrap();
    let m = &a.max_identity_residuals;
    let ok = a.passed()
        && m.kernel_third < 1e-8
        && a.kernel_fourth_min > 1e-3
        && m.plucker.max(m.normalization) < 1e-10
        && m.curvature_one < 1e-6
        && m.r1_vs_three_quarters < 1e-3
        && m.r2_vs_seven_over_324 < 1e-3
        && a.quadratic_form_max <= 1e-10
        && m.dual_path < 1e-9
        && a.delta > 0.0;
    outcome(
        ok,
        format!(
            "kernel {:.0e}/{:.3}, pluecker {:.0e}, K=1 {:.0e}, r1 {:.0e}, r2 {:.0e}, form max {:.4}, dual {:.0e}, delta {:.6}{}",
            m.kernel_third,
            a.kernel_fourth_min,
            m.plucker.max(m.normalization),
            m.curvature_one,
            m.r1_vs_three_quarters,
            m.r2_vs_seven_over_324,
            a.quadratic_form_max,
            m.dual_path,
            a.delta,
            if a.failures.is_empty() { String::new() } else { format!(", failures {:?}", a.failures) }
        ),
    )
}

fn criterion_7() -> Outcome {
    let w = double_quotient_witness().unwrap();
    let judge = |p: &orbit_curvature::eliminator::PlaneWitness| {
        for s in &p.approach {
            record(s.curvature);
        }
        let near = p.approach.iter().find(|s| (s.distance - 1e-2).abs() < 1e-3).map(|s| s.curvature).unwrap_or(f64::NAN);
        let ok = p.a_left < 1e-10 && p.a_right < 1e-10 && p.totally_real.holds && p.monotone() && (near - 1.0).abs() < 1e-2;
        (ok, format!("|A| {:.1e}/{:.1e}, K at 1e-2 {near:.5}", p.a_left, p.a_right))
    };
    let (ok, stated) = judge(&w.stated);
    let (_, corrected) = judge(&w.corrected);
    outcome(ok, format!("stated plane: {stated}; with e1^3 e2^2 in place of w1: {corrected}"))
}

fn criterion_8() -> Outcome {
    let w = so3_geodesic_witness();
    let target = 0.5 * (1.0 + 1.0 / 5f64.sqrt());
    let so3 = builtin_catalog().into_iter().find(|c| c.action.as_deref() == Some("so3_sym6_real")).unwrap();
    let v = check_improvedlem(&so3);
    let arithmetic = v.arithmetic();
    let ok = (w.alpha_sq - target).abs() < 1e-15
        && w.tangent_residual < 1e-10
        && w.cos_pq.abs() < 1.0 - 1e-6
        && v.eliminated()
        && arithmetic.contains("3 < 4");
    outcome(ok, format!("<q, T_p Gp> {:.1e}, cos(p, q) {:.4}, {}", w.tangent_residual, w.cos_pq, arithmetic))
}

fn criterion_9() -> Outcome {
    let report = run_catalog(&builtin_catalog()).unwrap();
    let all: Vec<String> = report.reports.iter().flat_map(|r| r.verdicts.iter().filter(|v| v.eliminated()).map(|v| v.arithmetic())).collect();
    let quoted = ["55 < 56", "20 < 22", "13 >= 9", "7 > 4"];
    let missing: Vec<&str> = quoted.iter().copied().filter(|q| !all.iter().any(|a| a.contains(q))).collect();
    let survivors: Vec<String> = report.survivors.iter().map(|(n, _)| n.clone()).collect();
    outcome(
        report.passed() && missing.is_empty(),
        format!("{} candidates, survivors {:?}, missing quotes {:?}", report.reports.len(), survivors, missing),
    )
}

fn criterion_10() -> Outcome {
    for action in builtin_actions() {
        if let Ok(r) = kappa_scan(&action, 100, 5, 0, true) {
            r.min.map(record);
        }
    }
    let case_v = kappa_scan(&spm_u1(1, 1, 0).unwrap(), 500, 10, 0, true).unwrap().min.map(record).unwrap_or(f64::NAN);
    let global = MIN_CURVATURE.with(|m| m.get());
    outcome(
        global >= 1.0 - 1e-9 && (3.8..=4.3).contains(&case_v),
        format!("min curvature seen {global:.12} >= 1 - 1e-9, case (v) scan min {case_v:.4} in [3.8, 4.3]"),
    )
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut unexpected = Vec::new();
    for (i, c) in criteria.iter().enumerate() {
        let n = i + 1;
        let o = c();
        println!("criterion {n:>2}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if o.pass == KNOWN_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}

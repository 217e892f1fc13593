use orbit_curvature::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("orbcurv").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["kappa-scan", "--action", "no-such-action"]).0, 2);
    assert_eq!(call(&["wcp1", "--a", "4", "--b", "2"]).0, 2);
    assert_eq!(call(&["wcp1", "--format", "xml"]).0, 2);
}

#[test]
fn help_exits_zero() {
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn wcp1_csv_has_seventeen_digits() {
    let (code, out, _) = call(&["wcp1", "--a", "2", "--b", "1", "--grid", "5"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("r,K,metric_coeff"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mantissa = first[1].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}

#[test]
fn scan_output_is_deterministic() {
    let a = call(&["kappa-scan", "--action", "hopf", "--points", "20", "--planes", "3", "--seed", "7"]);
    let b = call(&["kappa-scan", "--action", "hopf", "--points", "20", "--planes", "3", "--seed", "7"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn failing_certificate_exits_one() {
    // A negative tolerance makes the 7/4 lower bound unreachable.
    assert_eq!(call(&["c2r3", "--grid", "50", "--tol=-1"]).0, 1);
}

#[test]
fn eliminate_and_thorpe_audit_pass() {
    let (code, out, _) = call(&["eliminate", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["survivors_match_theorem"], true);
    let (code, out, _) = call(&["thorpe-audit", "--grid", "40", "--points", "16"]);
    assert_eq!(code, 0, "{out}");
}

//! Run the elimination rules over the built-in candidate catalog.

use orbit_curvature::eliminator::{builtin_catalog, query_case, run_catalog};

fn main() {
    let report = run_catalog(&builtin_catalog()).expect("valid catalog");
    for r in &report.reports {
        let rules: Vec<String> = r.eliminated_by.iter().map(|x| x.to_string()).collect();
        let arithmetic: Vec<String> = r.verdicts.iter().filter(|v| v.eliminated()).map(|v| v.arithmetic()).collect();
        if r.eliminated {
            println!("x {:<40} {} [{}]", r.name, rules.join(", "), arithmetic.join("; "));
        } else {
            println!("  {:<40} survives", r.name);
        }
    }
    println!("survivors match the classification: {}", report.survivors_match_theorem);
    if let Some(case) = query_case("case (iii)") {
        println!("{:?}: {} (kappa {:?})", case.case, case.description, case.kappa);
    }
}

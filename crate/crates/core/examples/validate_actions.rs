//! Antisymmetry and bracket closure of the built-in generator sets.

use orbit_curvature::actions::{builtin_actions, validate};

fn main() {
    for action in builtin_actions() {
        let r = validate(&action);
        println!(
            "{:<18} dim {:>2} group {:>2}  antisym {:.1e}  closure {:.1e}  {}",
            r.name,
            action.ambient_dim,
            action.group_dim,
            r.max_antisymmetry,
            r.max_closure_residual,
            if r.passed() { "ok" } else { "FAILED" }
        );
    }
}

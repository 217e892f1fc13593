//! Curvature-one planes at the point t of S^7 / SU(2) and the certificate
//! that the normal generator stays bounded away from them.

use orbit_curvature::closedform::t0;
use orbit_curvature::thorpe::{boundedness_certificate, circle_point, kernel_at, quadratic_form, Branch};

fn main() {
    let t = 0.2;
    let k = kernel_at(t).expect("kernel");
    println!("t = {t}: kernel eigenvalues {:?}", &k.eigenvalues[..4]);
    for theta in [0.0, 1.0, 2.0] {
        let p = circle_point(t, theta, Branch::Plus).expect("circle point");
        let q = quadratic_form(t, theta, Branch::Plus).expect("form");
        println!(
            "  theta {theta}: plucker {:.1e} normalization {:.1e} form {:.12}",
            p.plucker(),
            p.normalization(),
            q.closed_form
        );
    }

    let cert = boundedness_certificate(100, 32).expect("certificate");
    println!("t0 = {:.10} excluded", t0());
    println!("delta = {:.12} over {} points, max form value {:.3e}", cert.delta, cert.points, cert.max_value);
    println!(
        "endpoint limits: {:.9} (t -> 0), {:.9} (t -> pi/6)",
        cert.limit_t_to_0.extrapolated, cert.limit_t_to_pi_6.extrapolated
    );
}

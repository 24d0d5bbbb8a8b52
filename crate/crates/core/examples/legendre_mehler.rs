//! Legendre functions of the second kind and the two integral identities
//! checked by quadrature.
//!
//! Run with `cargo run --release --example legendre_mehler`.

use num_complex::Complex64;
use specgeo::wedgekernel::{
    green_suite, legendre_q, mehler_suite, QuadratureSpec, GREEN_SAMPLE, MEHLER_SAMPLE,
};

fn main() -> specgeo::Result<()> {
    let spec = QuadratureSpec::default();
    let z = 1.5f64;
    let q0 = legendre_q(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), z, &spec)?;
    let closed = 0.5 * ((z + 1.0) / (z - 1.0)).ln();
    println!("Q_0(1.5) = {:.15} (closed form {closed:.15})", q0.re);
    let q = legendre_q(Complex64::new(0.5, 0.0), Complex64::new(0.0, 2.0), z, &spec)?;
    println!("Q_(1/2)^(2i)(1.5) = {q:.6e}");

    println!("\nMehler-type product integral:");
    for (p, r) in MEHLER_SAMPLE.iter().zip(mehler_suite(&MEHLER_SAMPLE)) {
        let c = r?;
        println!(
            "  (nu, theta, a, b) = {p:?}: residual {:.1e}, cutoff {:.1}",
            c.residual, c.cutoff
        );
    }
    println!("\nLaplace transform of the heat kernel:");
    for (p, r) in GREEN_SAMPLE.iter().zip(green_suite(&GREEN_SAMPLE)) {
        let c = r?;
        println!(
            "  (d, s) = {p:?}: G = {:.12e}, residual {:.1e}",
            c.rhs, c.residual
        );
    }
    Ok(())
}

//! Expansion coefficients fitted from explicit spectra and compared with
//! the closed forms.
//!
//! Run with `cargo run --release --example spectra_fit`.

use specgeo::fitting::{fit_spectrum, FitConfig};
use specgeo::invariants::lune_series;
use specgeo::spectra::Spectrum;
use specgeo::Scalar;

fn main() -> specgeo::Result<()> {
    let sphere = fit_spectrum(&Spectrum::sphere(1.0)?, &FitConfig::sphere_default(), 1e-13)?;
    println!(
        "unit sphere: c(t^-1) = {:.8}, c(t^0) = {:.8} (expected 1 and 1/3)",
        sphere.coeff(-2).unwrap(),
        sphere.coeff(0).unwrap()
    );
    println!(
        "  residual norm {:.2e}, condition {:.2e}",
        sphere.residual_norm, sphere.condition_estimate
    );

    let k = 3;
    let lune = fit_spectrum(&Spectrum::lune(k, 1.0)?, &FitConfig::lune_default(), 1e-13)?;
    let exact = lune_series(k as u32, &Scalar::integer(1), 4)?;
    println!("\nlune of angle pi/{k}:");
    for (n, c) in &lune.coefficients {
        println!(
            "  n = {n:>2}: fitted {c:>14.8}  closed form {:>14.8}",
            exact.coeff(*n).to_f64()
        );
    }
    Ok(())
}

//! Exact heat coefficients: the building blocks and a full polygon series.
//!
//! Run with `cargo run --example coefficients`.

use specgeo::invariants::{
    area_coeff, boundary_coeff, hyper_vertex_coeff, lune_coeff_cs, polygon_series, vertex_coeff,
};
use specgeo::numkit::{bernoulli_at_half, rat, PiPoly};
use specgeo::{Angle, PolygonSpec, Scalar};

fn main() -> specgeo::Result<()> {
    println!("interior f_1 = {}", area_coeff(1));
    println!("B_2(1/2) = {}", bernoulli_at_half(2));
    for nu in 0..4 {
        println!("boundary r_{nu} = {}", boundary_coeff(nu));
    }
    for angle in [
        Angle::pi_over(2),
        Angle::pi_over(3),
        Angle::exact(2, 3),
        Angle::pi_over(1),
    ] {
        println!(
            "vertex e_0({angle}) = {}   e_1 = {}",
            vertex_coeff(0, &angle),
            vertex_coeff(1, &angle)
        );
    }

    // the hyperbolic wedge coefficient at pi/k is the lune coefficient up to sign
    for l in 0..5 {
        let h = hyper_vertex_coeff(l, &Angle::pi_over(4));
        println!(
            "c^H_{l}(pi/4) = {h}   c^S_{l}(pi/4) = {}",
            lune_coeff_cs(l, 4)
        );
    }

    // hyperbolic triangle with angles pi/3, pi/4, pi/5: area pi - sum of angles
    let triangle = PolygonSpec::new(
        Scalar::integer(-1),
        Scalar::Exact(PiPoly::monomial(rat(13, 60), 2)),
        Scalar::integer(3),
        vec![Angle::pi_over(3), Angle::pi_over(4), Angle::pi_over(5)],
    );
    let series = polygon_series(&triangle, 6)?;
    println!("\nheat trace of the triangle, coefficient of t^(n/2):");
    for (n, c) in series.terms() {
        println!("  n = {n:>2}: {c}  ({:.12e})", c.to_f64());
    }
    Ok(())
}

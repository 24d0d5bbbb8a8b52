//! Recovering a polygon and an orbisurface from their heat expansions.
//!
//! Run with `cargo run --release --example inverse_polygon`.

use specgeo::invariants::{orbifold_series, polygon_series};
use specgeo::inverse::{recover_orbifold, recover_polygon, PeelConfig};
use specgeo::numkit::{rat, PiPoly};
use specgeo::{Angle, OrbisurfaceSpec, PolygonSpec, Scalar};

fn main() -> specgeo::Result<()> {
    // spherical quadrilateral, curvature 1/4: area = (2 pi chi - sum (pi - angle)) / kappa
    let angles = vec![
        Angle::pi_over(2),
        Angle::exact(2, 3),
        Angle::pi_over(3),
        Angle::exact(2, 3),
    ];
    let poly = PolygonSpec::new(
        Scalar::rational(rat(1, 4)),
        Scalar::Exact(PiPoly::monomial(rat(2, 3), 2)),
        Scalar::rational(rat(7, 2)),
        angles,
    );
    let series = polygon_series(&poly, 84)?;
    let rec = recover_polygon(&series, &PeelConfig::default())?;
    println!(
        "polygon: area {}, perimeter {}, curvature {}, chi {}",
        rec.area, rec.perimeter, rec.curvature, rec.euler_char
    );
    for a in &rec.angles {
        println!("  angle {} x{}", a.angle, a.multiplicity);
    }

    // hyperbolic orbisurface: genus-two surface with a cone point of order 3
    // and no mirror, so the curvature has to be supplied
    let orb = OrbisurfaceSpec {
        curvature: Scalar::integer(-1),
        area: Scalar::Exact(PiPoly::monomial(rat(16, 3), 2)),
        mirror_length: Scalar::integer(0),
        cone_orders: vec![3],
        dihedral_half_orders: vec![],
    };
    let series = orbifold_series(&orb, 84)?;
    let rec = recover_orbifold(
        &series,
        Some(orb.curvature.clone()),
        &PeelConfig::reciprocal(),
    )?;
    println!("\norbisurface: area {}, orders {:?}", rec.area, rec.orders);
    for note in &rec.parity {
        println!("  {note}");
    }
    Ok(())
}

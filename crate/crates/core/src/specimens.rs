//! Seeded random polygons and orbisurfaces with exact data, used by the
//! round-trip checks.

use crate::error::Result;
use crate::geometry::{Angle, OrbisurfaceSpec, PolygonSpec};
use crate::invariants::{orbifold_series, polygon_series};
use crate::inverse::{recover_orbifold, recover_polygon, PeelConfig};
use crate::numkit::{int, rat, PiPoly, Rational, Scalar};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Angles, as fractions of `pi`, drawn for random polygons.
pub const POLYGON_ANGLES: [(u64, u64); 5] = [(1, 2), (1, 3), (2, 3), (1, 5), (1, 7)];

/// Curvatures drawn for random specimens.
pub const CURVATURES: [(i64, i64); 4] = [(-1, 1), (1, 1), (1, 4), (-1, 4)];

fn pick_curvature<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let (p, q) = *CURVATURES.choose(rng).expect("nonempty");
    rat(p, q)
}

fn pi_times(q: Rational) -> Scalar {
    Scalar::Exact(PiPoly::monomial(q, 2))
}

/// A polygon with 1 to 5 angles from [`POLYGON_ANGLES`], a curvature from
/// [`CURVATURES`], a rational perimeter in `(1/2, 10)` and the Euler
/// characteristic nearest to the flat case that keeps the area positive.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R) -> PolygonSpec {
    let kappa = pick_curvature(rng);
    let m = rng.gen_range(1..=5);
    let angles: Vec<Angle> = (0..m)
        .map(|_| {
            let (p, q) = *POLYGON_ANGLES.choose(rng).expect("nonempty");
            Angle::exact(p, q)
        })
        .collect();
    // defect = sum (pi - angle) / pi
    let defect: Rational = angles
        .iter()
        .map(|a| int(1) - a.pi_ratio().expect("exact angle"))
        .sum();
    // area kappa = pi (2 chi - defect) must have the sign of kappa
    let half = &defect / int(2);
    let chi = if kappa.is_positive() {
        half.floor() + int(1)
    } else {
        half.ceil() - int(1)
    };
    let area = (int(2) * chi - defect) / &kappa;
    let den = rng.gen_range(1..=10i64);
    let num = rng.gen_range((den / 2 + 1)..=(10 * den - 1));
    PolygonSpec::new(
        Scalar::rational(kappa),
        pi_times(area),
        Scalar::rational(rat(num, den)),
        angles,
    )
}

/// A closed orbisurface with up to three cone points and up to three
/// dihedral points of orders between 2 and 7, satisfying Gauss-Bonnet over a
/// sphere or disk (positive curvature) or a surface of Euler characteristic
/// `-2` or `-1` (negative curvature).
pub fn random_orbifold<R: Rng + ?Sized>(rng: &mut R) -> OrbisurfaceSpec {
    loop {
        let kappa = pick_curvature(rng);
        let cones: Vec<u32> = (0..rng.gen_range(0..=3))
            .map(|_| rng.gen_range(2..=7))
            .collect();
        let dihedral: Vec<u32> = (0..rng.gen_range(0..=3))
            .map(|_| rng.gen_range(2..=7))
            .collect();
        let has_mirror = !dihedral.is_empty() || rng.gen_bool(0.3);
        if cones.is_empty() && dihedral.is_empty() {
            continue;
        }
        let mirror = if has_mirror {
            let den = rng.gen_range(1..=6i64);
            Scalar::rational(rat(rng.gen_range(1..=8 * den), den))
        } else {
            Scalar::zero(true)
        };
        let chi_underlying = match (kappa.is_positive(), has_mirror) {
            (true, false) => 2,
            (true, true) => 1,
            (false, false) => -2,
            (false, true) => -1,
        };
        let mut spec = OrbisurfaceSpec {
            curvature: Scalar::rational(kappa.clone()),
            area: Scalar::zero(true),
            mirror_length: mirror,
            cone_orders: cones,
            dihedral_half_orders: dihedral,
        };
        let chi = spec.euler_characteristic(chi_underlying);
        if chi.is_zero() || chi.is_positive() != kappa.is_positive() {
            continue;
        }
        spec.area = pi_times(int(2) * chi / kappa);
        return spec;
    }
}

/// Multiset of orders an orbisurface series determines: each cone order
/// twice and each dihedral half-order once, sorted.
pub fn expected_orders(spec: &OrbisurfaceSpec) -> Vec<u64> {
    let mut out: Vec<u64> = spec
        .cone_orders
        .iter()
        .flat_map(|&n| [n as u64, n as u64])
        .chain(spec.dihedral_half_orders.iter().map(|&m| m as u64))
        .collect();
    out.sort_unstable();
    out
}

/// Outcome of recovering a specimen from its own series.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip {
    pub input: String,
    pub recovered: String,
    pub pass: bool,
    /// First mismatch found, empty on success.
    pub detail: String,
}

/// Largest deviation allowed between an input angle and its recovery.
pub const ANGLE_TOL: f64 = 1e-6;

fn angle_list(angles: &[Angle]) -> String {
    let parts: Vec<String> = angles.iter().map(|a| a.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn describe_polygon(p: &PolygonSpec) -> String {
    format!(
        "kappa={} area={} perimeter={} angles={}",
        p.curvature,
        p.area,
        p.perimeter,
        angle_list(&p.angles)
    )
}

fn describe_orbifold(o: &OrbisurfaceSpec) -> String {
    format!(
        "kappa={} area={} mirror={} cones={:?} dihedral={:?}",
        o.curvature, o.area, o.mirror_length, o.cone_orders, o.dihedral_half_orders
    )
}

fn first_mismatch(checks: &[(bool, String)]) -> String {
    checks
        .iter()
        .find(|(ok, _)| !ok)
        .map(|(_, m)| m.clone())
        .unwrap_or_default()
}

/// Builds the series of `spec` to order `max_n`, recovers the polygon, and
/// compares area, perimeter and curvature exactly, the Euler characteristic,
/// and the visible angles to [`ANGLE_TOL`].
pub fn polygon_round_trip(spec: &PolygonSpec, max_n: i32) -> Result<RoundTrip> {
    let series = polygon_series(spec, max_n)?;
    let rec = recover_polygon(&series, &PeelConfig::default())?;
    let mut want: Vec<f64> = spec
        .angles
        .iter()
        .filter(|a| !a.is_straight())
        .map(|a| a.to_radians())
        .collect();
    want.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = rec
        .angles
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.angle.to_radians(), r.multiplicity as usize))
        .collect();
    got.sort_by(f64::total_cmp);
    let angles_ok = want.len() == got.len()
        && want
            .iter()
            .zip(&got)
            .all(|(a, b)| (a - b).abs() <= ANGLE_TOL);
    let chi = spec.euler_characteristic()?;
    let recovered_angles: Vec<Angle> = rec
        .angles
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.angle, r.multiplicity as usize))
        .collect();
    let recovered = format!(
        "kappa={} area={} perimeter={} angles={} chi={}",
        rec.curvature,
        rec.area,
        rec.perimeter,
        angle_list(&recovered_angles),
        rec.euler_char
    );
    let detail = first_mismatch(&[
        (rec.area == spec.area, "area differs".into()),
        (rec.perimeter == spec.perimeter, "perimeter differs".into()),
        (rec.curvature == spec.curvature, "curvature differs".into()),
        (angles_ok, "angle multiset differs".into()),
        (
            rec.euler_char == chi,
            format!("Euler characteristic {} != {chi}", rec.euler_char),
        ),
    ]);
    Ok(RoundTrip {
        input: describe_polygon(spec),
        recovered,
        pass: detail.is_empty(),
        detail,
    })
}

/// Builds the series of `spec`, recovers the orbisurface (supplying the
/// curvature only when there is no mirror locus to read it from), and
/// compares area, mirror length, curvature and the order multiset exactly.
pub fn orbifold_round_trip(spec: &OrbisurfaceSpec, max_n: i32) -> Result<RoundTrip> {
    let series = orbifold_series(spec, max_n)?;
    let kappa = spec.mirror_length.is_zero().then(|| spec.curvature.clone());
    let rec = recover_orbifold(&series, kappa, &PeelConfig::reciprocal())?;
    let want = expected_orders(spec);
    let recovered = format!(
        "kappa={} area={} mirror={} orders={:?}",
        rec.curvature, rec.area, rec.mirror_length, rec.orders
    );
    let detail = first_mismatch(&[
        (rec.area == spec.area, "area differs".into()),
        (
            rec.mirror_length == spec.mirror_length,
            "mirror length differs".into(),
        ),
        (rec.curvature == spec.curvature, "curvature differs".into()),
        (
            rec.orders == want,
            format!("orders {:?} != {want:?}", rec.orders),
        ),
    ]);
    Ok(RoundTrip {
        input: describe_orbifold(spec),
        recovered,
        pass: detail.is_empty(),
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn polygons_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = random_polygon(&mut rng);
            assert!(p.check().is_ok(), "{p:?}");
            assert!(p.is_exact());
        }
    }

    #[test]
    fn orbifolds_satisfy_gauss_bonnet() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let o = random_orbifold(&mut rng);
            assert!(o.check().is_ok(), "{o:?}");
            let chi_u = match (o.curvature.signum() > 0, o.mirror_length.is_zero()) {
                (true, true) => 2,
                (true, false) => 1,
                (false, true) => -2,
                (false, false) => -1,
            };
            assert!(o.satisfies_gauss_bonnet(chi_u));
        }
    }

    #[test]
    fn expected_multiset() {
        let o = OrbisurfaceSpec {
            curvature: Scalar::integer(1),
            area: pi_times(int(1)),
            mirror_length: Scalar::integer(1),
            cone_orders: vec![4],
            dihedral_half_orders: vec![3],
        };
        assert_eq!(expected_orders(&o), vec![3, 4, 4]);
    }

    #[test]
    fn specimens_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let p = random_polygon(&mut rng);
            let r = polygon_round_trip(&p, 84).unwrap();
            assert!(r.pass, "{r:?}");
        }
        for _ in 0..3 {
            let o = random_orbifold(&mut rng);
            let r = orbifold_round_trip(&o, 84).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}

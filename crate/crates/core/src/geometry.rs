//! Polygons, orbisurfaces and truncated heat-trace series.
//!
//! Exponents of `t` are stored as integers `n` meaning `t^(n/2)`.

use crate::error::{Error, Result};
use crate::numkit::{int, rat, PiPoly, Rational, Scalar};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

/// An interior angle in `(0, 2pi]`: exact `(p/q) pi` or radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Exact { pi_num: u64, pi_den: u64 },
    Radians { rad: f64 },
}

impl Angle {
    /// `(p/q) pi`, reduced to lowest terms. Range is checked by `validate`.
    pub fn exact(p: u64, q: u64) -> Angle {
        let g = p.gcd(&q).max(1);
        Angle::Exact {
            pi_num: p / g,
            pi_den: q / g,
        }
    }

    /// `pi / k`.
    pub fn pi_over(k: u64) -> Angle {
        Angle::exact(1, k)
    }

    pub fn radians(x: f64) -> Angle {
        Angle::Radians { rad: x }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact { .. })
    }

    /// `angle / pi` as an exact rational.
    pub fn pi_ratio(&self) -> Option<Rational> {
        match *self {
            Angle::Exact { pi_num, pi_den } if pi_den > 0 => {
                Some(rat(pi_num as i64, pi_den as i64))
            }
            _ => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match *self {
            Angle::Exact { pi_num, pi_den } => PI * pi_num as f64 / pi_den as f64,
            Angle::Radians { rad } => rad,
        }
    }

    /// The angle as an exact `PiPoly`, if exact.
    pub fn to_pipoly(&self) -> Option<PiPoly> {
        self.pi_ratio().map(|q| PiPoly::monomial(q, 2))
    }

    pub fn in_range(&self) -> bool {
        match *self {
            Angle::Exact { pi_num, pi_den } => pi_num > 0 && pi_den > 0 && pi_num <= 2 * pi_den,
            Angle::Radians { rad } => rad > 0.0 && rad <= 2.0 * PI,
        }
    }

    /// Angles equal to pi carry no vertex contribution.
    pub fn is_straight(&self) -> bool {
        match *self {
            Angle::Exact { pi_num, pi_den } => pi_num == pi_den,
            Angle::Radians { rad } => (rad - PI).abs() <= 4.0 * f64::EPSILON * PI,
        }
    }

    /// Parses `p/qpi`, `ppi`, `pi` (exact) or a decimal in radians.
    pub fn parse(text: &str) -> Option<Angle> {
        let s = text.trim();
        if let Some(body) = s.strip_suffix("pi") {
            let body = body.trim_end_matches('*');
            let (p, q) = match body.split_once('/') {
                Some((p, q)) => (p.trim().parse().ok()?, q.trim().parse().ok()?),
                None if body.is_empty() => (1, 1),
                None => (body.parse().ok()?, 1),
            };
            if q == 0 {
                return None;
            }
            return Some(Angle::exact(p, q));
        }
        let x: f64 = s.parse().ok()?;
        x.is_finite().then_some(Angle::radians(x))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Exact { pi_num, pi_den: 1 } => write!(f, "{pi_num}pi"),
            Angle::Exact { pi_num, pi_den } => write!(f, "{pi_num}/{pi_den}pi"),
            Angle::Radians { rad } => write!(f, "{}", crate::numkit::format_float(rad)),
        }
    }
}

/// A failed invariant found by `validate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    AngleOutOfRange { index: usize },
    NonPositiveArea,
    NegativePerimeter,
    NonIntegerEuler,
    ConeOrderTooSmall { index: usize },
    DihedralOrderTooSmall { index: usize },
    DihedralWithoutMirror,
    NegativeMirrorLength,
    GaussBonnetMismatch,
}

/// A geodesic polygon in a surface of constant curvature.
///
/// The perimeter counts an edge twice when the domain lies on both sides
/// of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    pub curvature: Scalar,
    pub area: Scalar,
    pub perimeter: Scalar,
    pub angles: Vec<Angle>,
}

impl PolygonSpec {
    pub fn new(curvature: Scalar, area: Scalar, perimeter: Scalar, angles: Vec<Angle>) -> Self {
        Self {
            curvature,
            area,
            perimeter,
            angles,
        }
    }

    /// All inputs exact: series derived from this spec are exact.
    pub fn is_exact(&self) -> bool {
        self.curvature.is_exact()
            && self.area.is_exact()
            && self.perimeter.is_exact()
            && self.angles.iter().all(Angle::is_exact)
    }

    /// `(M pi + area kappa - sum of angles) / (2 pi)`, unrounded.
    pub fn euler_value(&self) -> Scalar {
        let m = self.angles.len() as i64;
        if self.is_exact() {
            let sum_angles: PiPoly = self.angles.iter().filter_map(Angle::to_pipoly).sum();
            let ak = self.area.mul(&self.curvature);
            let numer = PiPoly::monomial(int(m), 2) + ak.as_exact().cloned().unwrap_or_default()
                - sum_angles;
            Scalar::Exact(numer.shift(-2).scale(&rat(1, 2)))
        } else {
            let sum_angles: f64 = self.angles.iter().map(Angle::to_radians).sum();
            let ak = self.area.to_f64() * self.curvature.to_f64();
            Scalar::Float((m as f64 * PI + ak - sum_angles) / (2.0 * PI))
        }
    }

    /// Euler characteristic from Gauss-Bonnet; must be an integer.
    pub fn euler_characteristic(&self) -> Result<i64> {
        match self.euler_value() {
            Scalar::Exact(p) => p
                .as_integer()
                .ok_or(Error::NonIntegerEuler { value: p.to_f64() }),
            Scalar::Float(x) => {
                let r = x.round();
                if (x - r).abs() <= 1e-9 {
                    Ok(r as i64)
                } else {
                    Err(Error::NonIntegerEuler { value: x })
                }
            }
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (index, a) in self.angles.iter().enumerate() {
            if !a.in_range() {
                out.push(Violation::AngleOutOfRange { index });
            }
        }
        if self.area.signum() <= 0 {
            out.push(Violation::NonPositiveArea);
        }
        if self.perimeter.signum() < 0 {
            out.push(Violation::NegativePerimeter);
        }
        if out.is_empty() && self.euler_characteristic().is_err() {
            out.push(Violation::NonIntegerEuler);
        }
        out
    }

    /// `Ok(())` when `validate` finds nothing.
    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// A closed orbisurface of constant curvature.
///
/// A dihedral point of isotropy order `2m` is stored as `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbisurfaceSpec {
    pub curvature: Scalar,
    pub area: Scalar,
    pub mirror_length: Scalar,
    #[serde(default)]
    pub cone_orders: Vec<u32>,
    #[serde(default)]
    pub dihedral_half_orders: Vec<u32>,
}

impl OrbisurfaceSpec {
    pub fn is_exact(&self) -> bool {
        self.curvature.is_exact() && self.area.is_exact() && self.mirror_length.is_exact()
    }

    /// Orbifold Euler characteristic for an underlying surface of Euler
    /// characteristic `chi_underlying`.
    pub fn euler_characteristic(&self, chi_underlying: i64) -> Rational {
        let mut chi = int(chi_underlying);
        for &m in &self.dihedral_half_orders {
            chi -= rat(1, 2) * (int(1) - rat(1, m.max(1) as i64));
        }
        for &n in &self.cone_orders {
            chi -= int(1) - rat(1, n.max(1) as i64);
        }
        chi
    }

    /// Checks `area * kappa = 2 pi chi(O)` for the given underlying surface.
    pub fn satisfies_gauss_bonnet(&self, chi_underlying: i64) -> bool {
        let chi = self.euler_characteristic(chi_underlying);
        let lhs = self.area.mul(&self.curvature);
        match lhs {
            Scalar::Exact(p) => p == PiPoly::monomial(chi * int(2), 2),
            Scalar::Float(x) => {
                let rhs = 2.0 * PI * crate::numkit::to_f64(&chi);
                (x - rhs).abs() <= 1e-9 * (1.0 + rhs.abs())
            }
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.area.signum() <= 0 {
            out.push(Violation::NonPositiveArea);
        }
        if self.mirror_length.signum() < 0 {
            out.push(Violation::NegativeMirrorLength);
        }
        for (index, &n) in self.cone_orders.iter().enumerate() {
            if n < 2 {
                out.push(Violation::ConeOrderTooSmall { index });
            }
        }
        for (index, &m) in self.dihedral_half_orders.iter().enumerate() {
            if m < 1 {
                out.push(Violation::DihedralOrderTooSmall { index });
            }
        }
        if !self.dihedral_half_orders.is_empty() && self.mirror_length.signum() <= 0 {
            out.push(Violation::DihedralWithoutMirror);
        }
        if let Scalar::Exact(p) = self.area.mul(&self.curvature) {
            if p.shift(-2).as_rational().is_none() {
                out.push(Violation::GaussBonnetMismatch);
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// Truncated small-`t` expansion `sum_n c_n t^(n/2)` for `min_n <= n <= max_n`.
///
/// Absent keys are zero. Coefficients are all exact or all float.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticSeries {
    coeffs: BTreeMap<i32, Scalar>,
    min_n: i32,
    max_n: i32,
    exact: bool,
    curvature: Option<Scalar>,
}

impl AsymptoticSeries {
    pub fn new(min_n: i32, max_n: i32, exact: bool) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            min_n,
            max_n,
            exact,
            curvature: None,
        }
    }

    pub fn with_curvature(mut self, kappa: Scalar) -> Self {
        self.curvature = Some(kappa.coerce(self.exact));
        self
    }

    pub fn min_n(&self) -> i32 {
        self.min_n
    }

    pub fn max_n(&self) -> i32 {
        self.max_n
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn curvature(&self) -> Option<&Scalar> {
        self.curvature.as_ref()
    }

    pub fn contains(&self, n: i32) -> bool {
        self.min_n <= n && n <= self.max_n
    }

    /// Coefficient of `t^(n/2)`; zero when absent or out of range.
    pub fn coeff(&self, n: i32) -> Scalar {
        self.coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.exact))
    }

    /// Adds `value` to the coefficient of `t^(n/2)`; ignored outside the range.
    pub fn add_to(&mut self, n: i32, value: &Scalar) {
        if !self.contains(n) {
            return;
        }
        let value = value.clone().coerce(self.exact);
        let next = match self.coeffs.get(&n) {
            Some(c) => c.add(&value),
            None => value,
        };
        let next = next.coerce(self.exact);
        if next.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, next);
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Scalar)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    fn same_range(&self, other: &Self) -> Result<()> {
        if self.min_n != other.min_n || self.max_n != other.max_n {
            return Err(Error::RangeMismatch(format!(
                "[{}, {}] vs [{}, {}]",
                self.min_n, self.max_n, other.min_n, other.max_n
            )));
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.same_range(other)?;
        let mut out = self.clone();
        out.exact = self.exact && other.exact;
        if !out.exact {
            out = out.to_float();
        }
        for (n, c) in other.terms() {
            out.add_to(n, c);
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scaled(&int(-1)))
    }

    pub fn scaled(&self, q: &Rational) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            ..self.clone()
        };
        for (n, c) in self.terms() {
            out.add_to(n, &c.scale(q));
        }
        out
    }

    /// The same series with every coefficient converted to float.
    pub fn to_float(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, c.clone().coerce(false)))
                .collect(),
            exact: false,
            curvature: self.curvature.clone().map(|k| k.coerce(false)),
            ..*self
        }
    }

    /// Restricts the range to `n <= max_n`.
    pub fn truncated(&self, max_n: i32) -> Self {
        let mut out = self.clone();
        out.max_n = max_n.min(self.max_n);
        out.coeffs.retain(|n, _| *n <= out.max_n);
        out
    }

    /// Evaluates the truncated series at `t`.
    pub fn evaluate(&self, t: f64) -> f64 {
        self.terms()
            .map(|(n, c)| c.to_f64() * t.powf(n as f64 / 2.0))
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    n: i32,
    value: Scalar,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    exponent_meaning: String,
    min_n: i32,
    max_n: i32,
    exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curvature: Option<Scalar>,
    coefficients: Vec<TermRepr>,
}

const EXPONENT_MEANING: &str = "t^(n/2)";

impl Serialize for AsymptoticSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            exponent_meaning: EXPONENT_MEANING.into(),
            min_n: self.min_n,
            max_n: self.max_n,
            exact: self.exact,
            curvature: self.curvature.clone(),
            coefficients: self
                .terms()
                .map(|(n, c)| TermRepr {
                    n,
                    value: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AsymptoticSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = SeriesRepr::deserialize(d)?;
        if r.min_n < -2 || r.max_n < r.min_n {
            return Err(D::Error::custom("invalid exponent range"));
        }
        let mut out = AsymptoticSeries::new(r.min_n, r.max_n, r.exact);
        if let Some(k) = r.curvature {
            out = out.with_curvature(k);
        }
        for term in r.coefficients {
            if term.value.is_exact() != r.exact {
                return Err(D::Error::custom("exact and float coefficients mixed"));
            }
            if !out.contains(term.n) {
                return Err(D::Error::custom(format!(
                    "exponent {} out of range",
                    term.n
                )));
            }
            out.add_to(term.n, &term.value);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi_times(q: Rational) -> Scalar {
        Scalar::Exact(PiPoly::monomial(q, 2))
    }

    #[test]
    fn euclidean_square() {
        let sq = PolygonSpec::new(
            Scalar::integer(0),
            Scalar::integer(1),
            Scalar::integer(4),
            vec![Angle::exact(1, 2); 4],
        );
        assert_eq!(sq.euler_characteristic(), Ok(1));
        assert!(sq.validate().is_empty());
    }

    #[test]
    fn hyperbolic_triangle_defect() {
        // area = pi - (1/2 + 1/3 + 1/7) pi
        let area = pi_times(int(1) - rat(1, 2) - rat(1, 3) - rat(1, 7));
        let tri = PolygonSpec::new(
            Scalar::integer(-1),
            area,
            Scalar::integer(3),
            vec![Angle::exact(1, 2), Angle::exact(1, 3), Angle::exact(1, 7)],
        );
        assert_eq!(tri.euler_characteristic(), Ok(1));
    }

    #[test]
    fn round_sphere() {
        let s = PolygonSpec::new(
            Scalar::integer(1),
            pi_times(int(4)),
            Scalar::integer(0),
            vec![],
        );
        assert_eq!(s.euler_characteristic(), Ok(2));
    }

    #[test]
    fn inconsistent_spec() {
        let s = PolygonSpec::new(
            Scalar::integer(-1),
            pi_times(rat(1, 5)),
            Scalar::integer(3),
            vec![Angle::exact(1, 2); 3],
        );
        assert!(matches!(
            s.euler_characteristic(),
            Err(Error::NonIntegerEuler { .. })
        ));
        assert_eq!(s.validate(), vec![Violation::NonIntegerEuler]);
    }

    #[test]
    fn float_mode_euler() {
        let s = PolygonSpec::new(
            Scalar::Float(0.0),
            Scalar::Float(2.0),
            Scalar::Float(6.0),
            vec![Angle::radians(PI / 2.0); 4],
        );
        assert_eq!(s.euler_characteristic(), Ok(1));
    }

    #[test]
    fn orbifold_euler() {
        let plain = OrbisurfaceSpec {
            curvature: Scalar::integer(1),
            area: pi_times(int(4)),
            mirror_length: Scalar::integer(0),
            cone_orders: vec![],
            dihedral_half_orders: vec![],
        };
        assert_eq!(plain.euler_characteristic(2), int(2));
        for k in 2..7u32 {
            let zk = OrbisurfaceSpec {
                area: pi_times(rat(4, k as i64)),
                cone_orders: vec![k, k],
                ..plain.clone()
            };
            assert_eq!(zk.euler_characteristic(2), rat(2, k as i64));
            assert!(zk.satisfies_gauss_bonnet(2));
            let dk = OrbisurfaceSpec {
                area: pi_times(rat(2, k as i64)),
                mirror_length: pi_times(int(2)),
                cone_orders: vec![],
                dihedral_half_orders: vec![k, k],
                ..plain.clone()
            };
            assert_eq!(dk.euler_characteristic(1), rat(1, k as i64));
            assert!(dk.satisfies_gauss_bonnet(1));
        }
    }

    #[test]
    fn violations() {
        let bad = PolygonSpec::new(
            Scalar::integer(1),
            Scalar::integer(1),
            Scalar::integer(1),
            vec![Angle::exact(3, 1)],
        );
        assert_eq!(
            bad.validate(),
            vec![Violation::AngleOutOfRange { index: 0 }]
        );
        let orb = OrbisurfaceSpec {
            curvature: Scalar::integer(1),
            area: pi_times(int(1)),
            mirror_length: Scalar::integer(0),
            cone_orders: vec![],
            dihedral_half_orders: vec![2],
        };
        assert_eq!(orb.validate(), vec![Violation::DihedralWithoutMirror]);
    }

    #[test]
    fn angle_parsing() {
        assert_eq!(Angle::parse("1/2pi"), Some(Angle::exact(1, 2)));
        assert_eq!(Angle::parse("2/4pi"), Some(Angle::exact(1, 2)));
        assert_eq!(Angle::parse("pi"), Some(Angle::exact(1, 1)));
        assert_eq!(Angle::parse("1.25"), Some(Angle::radians(1.25)));
        assert_eq!(Angle::parse("1/0pi"), None);
        assert!(Angle::exact(1, 1).is_straight());
    }

    #[test]
    fn spec_json_round_trip() {
        let tri = PolygonSpec::new(
            Scalar::rational(rat(-1, 4)),
            pi_times(rat(4, 3)),
            Scalar::Float(2.5),
            vec![Angle::exact(2, 3), Angle::radians(0.75)],
        );
        let text = serde_json::to_string(&tri).unwrap();
        assert!(text.contains(r#"{"pi_num":2,"pi_den":3}"#));
        assert!(text.contains(r#""pi_half_exp":2"#));
        let back: PolygonSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tri);
    }

    #[test]
    fn series_json_round_trip() {
        let mut s = AsymptoticSeries::new(-2, 4, true).with_curvature(Scalar::integer(-1));
        s.add_to(-2, &Scalar::Exact(PiPoly::monomial(rat(1, 4), -2)));
        s.add_to(-1, &Scalar::Exact(PiPoly::monomial(rat(-1, 2), -1)));
        s.add_to(0, &Scalar::rational(rat(1, 3)));
        s.add_to(9, &Scalar::integer(1));
        let text = serde_json::to_string(&s).unwrap();
        let back: AsymptoticSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.coeff(9), Scalar::integer(0));
        let mixed = text.replace(r#"{"num":"1","den":"3"}"#, "0.5");
        assert!(serde_json::from_str::<AsymptoticSeries>(&mixed).is_err());
    }
}

//! Recovery of geometry from heat-invariant series: area, perimeter and
//! curvature; the vertex sums; the angle multiset by peeling off the smallest
//! angle; the Euler characteristic; and the singular data of orbisurfaces.
//!
//! Angles enter the vertex sums through `W_nu = sum_i w_(nu+1)(x_i)`, with
//! `x = angle / pi` and `w_j(x) = (1 - x^(2j)) / x^(2j-1)`. The differences
//! `U_nu = W_(nu+1) - W_nu = sum_i (x_i^-2 - 1) x_i^-(2nu+1)` are dominated by
//! the smallest angle, whose value and multiplicity are read off at depth and
//! then subtracted.

use crate::error::{Error, Result};
use crate::geometry::{Angle, AsymptoticSeries};
use crate::invariants::{area_coeff, vertex_weight, vertex_weight_row};
use crate::numkit::{int, pow, rat, snap_rational, to_f64, PiPoly, Rational, Scalar};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Area, perimeter and curvature read from the three leading terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicInvariants {
    pub area: Scalar,
    pub perimeter: Scalar,
    pub curvature: Scalar,
}

fn require(series: &AsymptoticSeries, n: i32) -> Result<Scalar> {
    if series.contains(n) {
        Ok(series.coeff(n))
    } else {
        Err(Error::MissingCoefficient { n })
    }
}

fn div(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    a.checked_div(b)
        .ok_or_else(|| Error::Domain(format!("cannot divide {a} by {b} exactly")))
}

/// Area `4 pi c(-2)`, perimeter `-8 sqrt(pi) c(-1)` and curvature
/// `-32 sqrt(pi) c(1) / perimeter`, or `12 pi c(0) / area` without boundary.
pub fn recover_basic(series: &AsymptoticSeries) -> Result<BasicInvariants> {
    let area = require(series, -2)?.shift(2).scale(&int(4));
    let perimeter = require(series, -1)?.shift(1).scale(&int(-8));
    let curvature = if perimeter.is_zero() {
        if !series.contains(0) {
            return Err(Error::ZeroPerimeterAmbiguous);
        }
        div(&series.coeff(0).shift(2).scale(&int(12)), &area)?
    } else {
        div(&require(series, 1)?.shift(1).scale(&int(-32)), &perimeter)?
    };
    Ok(BasicInvariants {
        area,
        perimeter,
        curvature,
    })
}

/// Vertex sums `V_nu = sum_i e_nu(angle_i)` for `nu = 0..=order`.
pub fn recover_vertex_sums(
    series: &AsymptoticSeries,
    area: &Scalar,
    curvature: &Scalar,
    order: usize,
) -> Result<Vec<Scalar>> {
    if curvature.is_zero() && order >= 1 {
        return Err(Error::ZeroCurvature);
    }
    let area_4pi = area.shift(-2).scale(&rat(1, 4));
    (0..=order)
        .map(|nu| {
            let c = require(series, 2 * nu as i32)?;
            let interior = area_4pi
                .mul(&curvature.powi(nu as u32 + 1))
                .scale(&area_coeff(nu + 1));
            div(&c.sub(&interior), &curvature.powi(nu as u32))
        })
        .collect()
}

/// The sequence `W_0..=W_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WSequence {
    pub values: Vec<Scalar>,
}

impl WSequence {
    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Exact rational values, when every entry is a plain rational.
    fn rationals(&self) -> Option<Vec<Rational>> {
        self.values
            .iter()
            .map(|v| v.as_exact().and_then(PiPoly::as_rational))
            .collect()
    }

    /// `W` computed directly from a list of angles.
    pub fn from_angles(angles: &[Angle], order: usize) -> Self {
        let exact = angles.iter().all(Angle::is_exact);
        let values = (0..=order)
            .map(|nu| {
                let mut acc = Scalar::zero(exact);
                for a in angles {
                    acc = acc.add(&w_value(a, nu + 1));
                }
                acc
            })
            .collect();
        Self { values }
    }
}

fn w_value(angle: &Angle, j: usize) -> Scalar {
    match angle.pi_ratio() {
        Some(x) => Scalar::rational((int(1) - pow(&x, 2 * j as i32)) / pow(&x, 2 * j as i32 - 1)),
        None => {
            let x = angle.to_radians() / PI;
            Scalar::Float((1.0 - x.powi(2 * j as i32)) / x.powi(2 * j as i32 - 1))
        }
    }
}

/// Solves the triangular system `V_nu = sum_(j=1)^(nu+1) a_(nu,j) W_(j-1)`.
pub fn recover_w(vertex_sums: &[Scalar]) -> Result<WSequence> {
    if vertex_sums.is_empty() {
        return Err(Error::Domain("need at least one vertex sum".into()));
    }
    let mut w: Vec<Scalar> = Vec::with_capacity(vertex_sums.len());
    for (nu, v) in vertex_sums.iter().enumerate() {
        let row = vertex_weight_row(nu);
        let mut rest = v.clone();
        for (j, wj) in w.iter().enumerate() {
            rest = rest.sub(&wj.scale(&row[j]));
        }
        let lead = &row[nu];
        assert!(!lead.is_zero(), "leading weight vanishes");
        w.push(rest.scale(&lead.recip()));
    }
    Ok(WSequence { values: w })
}

/// How peeled estimates are snapped to exact angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SnapMode {
    /// Snap `angle / pi` to `p/q` with `q <= max_den`, or keep the float.
    Rational { max_den: u64 },
    /// Require `angle = pi / q` with `2 <= q <= max_q`.
    Reciprocal { max_q: u64 },
}

/// Controls of the peeling procedure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeelConfig {
    /// Relative size of the remainder at which peeling stops (float path).
    pub tol: f64,
    /// Upper bound on the number of peeled angles (with multiplicity).
    pub max_angles: usize,
    /// Distance within which an estimate is snapped to an exact angle.
    pub snap_tol: f64,
    pub snap: SnapMode,
}

impl Default for PeelConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_angles: 64,
            snap_tol: 1e-9,
            snap: SnapMode::Rational { max_den: 1000 },
        }
    }
}

impl PeelConfig {
    pub fn reciprocal() -> Self {
        Self {
            snap: SnapMode::Reciprocal { max_q: 100_000 },
            ..Self::default()
        }
    }
}

/// Record of one peeling step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelStep {
    /// Index `D` of the deepest difference used.
    pub depth: usize,
    /// Estimate of `(angle / pi)^2` from `U_(D-1) / U_D`.
    pub ratio: f64,
    /// The recovered angle.
    pub angle: Angle,
    pub multiplicity: u32,
    /// Distance of the multiplicity estimate from the nearest integer.
    pub multiplicity_residual: f64,
    /// True when the angle was snapped and subtracted exactly.
    pub exact: bool,
}

/// Peeled angle multiset with diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRecovery {
    /// Distinct angles with multiplicities, increasing.
    pub angles: Vec<(Angle, u32)>,
    pub steps: Vec<PeelStep>,
    pub warnings: Vec<String>,
}

fn diff_rational(w: &[Rational]) -> Vec<Rational> {
    w.windows(2).map(|p| &p[1] - &p[0]).collect()
}

fn contribution_rational(x: &Rational, nu: usize) -> Rational {
    (pow(x, -2) - int(1)) * pow(x, -(2 * nu as i32 + 1))
}

fn contribution_float(x: f64, nu: usize) -> f64 {
    (x.powi(-2) - 1.0) * x.powi(-(2 * nu as i32 + 1))
}

enum Snapped {
    Exact(Rational),
    Float,
}

fn snap(x: f64, config: &PeelConfig) -> Result<Snapped> {
    match config.snap {
        SnapMode::Rational { max_den } => Ok(match snap_rational(x, max_den, config.snap_tol) {
            Some((p, q)) if p != q => Snapped::Exact(rat(p as i64, q as i64)),
            _ => Snapped::Float,
        }),
        SnapMode::Reciprocal { max_q } => {
            let q = (1.0 / x).round();
            if q >= 2.0 && q <= max_q as f64 && (x - 1.0 / q).abs() <= config.snap_tol {
                Ok(Snapped::Exact(rat(1, q as i64)))
            } else {
                Err(Error::NonReciprocalAngle { value: x * PI })
            }
        }
    }
}

fn exact_angle(x: &Rational) -> Angle {
    let p = x.numer().to_u64().unwrap_or(0);
    let q = x.denom().to_u64().unwrap_or(1);
    Angle::exact(p, q)
}

fn record(found: &mut BTreeMap<OrderedAngle, u32>, angle: Angle, m: u32) {
    *found.entry(OrderedAngle(angle)).or_insert(0) += m;
}

/// Angle keyed by its radian value for ordering.
#[derive(Debug, Clone, PartialEq)]
struct OrderedAngle(Angle);

impl Eq for OrderedAngle {}

impl PartialOrd for OrderedAngle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedAngle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self.0.pi_ratio(), other.0.pi_ratio()) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => self.0.to_radians().total_cmp(&other.0.to_radians()),
        }
    }
}

/// Depth at which successive ratio estimates agree best; deep entries of a
/// float remainder are dominated by the error of earlier subtractions.
fn stable_depth(u: &[f64]) -> Option<usize> {
    let ratios: Vec<Option<f64>> = (1..u.len())
        .map(|d| {
            let r = u[d - 1] / u[d];
            (r.is_finite() && r > 0.0).then_some(r)
        })
        .collect();
    let mut best: Option<(usize, f64)> = None;
    for i in 1..ratios.len() {
        if let (Some(a), Some(b)) = (ratios[i - 1], ratios[i]) {
            let change = (b - a).abs() / b;
            if best.is_none_or(|(_, c)| change <= c) {
                best = Some((i + 1, change));
            }
        }
    }
    best.map(|(d, _)| d)
        .or_else(|| ratios.first().and_then(|r| r.map(|_| 1)))
}

/// `U_(d-1) / U_d` with Aitken extrapolation over the three deepest ratios.
/// The ratio approaches the squared dominant angle geometrically, slowly when
/// the next angle is close, and the extrapolation removes that leading error.
fn accelerated_ratio(u: &[Rational], d: usize) -> Rational {
    let r = |j: usize| &u[j - 1] / &u[j];
    let last = r(d);
    if d < 3 || u[d - 1].is_zero() || u[d - 2].is_zero() {
        return last;
    }
    let (r1, r2) = (r(d - 1), r(d - 2));
    let denom = &last - &r1 * int(2) + &r2;
    if denom.is_zero() {
        return last;
    }
    let step = &last - &r1;
    let acc = &last - &step * &step / denom;
    if acc.is_positive() {
        acc
    } else {
        last
    }
}

/// Peels the angle multiset off `W`. Exact sequences are peeled exactly as
/// long as every estimate snaps to an exact angle; otherwise the remainder is
/// peeled in floating point at an adaptively chosen depth.
pub fn recover_angles(w: &WSequence, config: &PeelConfig) -> Result<AngleRecovery> {
    let mut found: BTreeMap<OrderedAngle, u32> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut warnings = Vec::new();
    let mut count = 0usize;

    let mut float_u: Option<Vec<f64>> = None;
    let mut explained: Vec<f64> = vec![0.0; w.order()];

    if let Some(wr) = w.rationals() {
        let mut u = diff_rational(&wr);
        loop {
            let Some(d) = u.iter().rposition(|v| !v.is_zero()) else {
                break;
            };
            if count >= config.max_angles {
                return Err(Error::NonConvergent(format!(
                    "more than {} angles peeled",
                    config.max_angles
                )));
            }
            if d == 0 {
                float_u = Some(u.iter().map(to_f64).collect());
                break;
            }
            let ratio = to_f64(&accelerated_ratio(&u, d));
            if !(ratio > 0.0) {
                return Err(Error::NegativeRatio { index: d, ratio });
            }
            let x = ratio.sqrt();
            let snapped = match snap(x, config)? {
                Snapped::Exact(xs) => xs,
                Snapped::Float => {
                    float_u = Some(u.iter().map(to_f64).collect());
                    break;
                }
            };
            let m_est = to_f64(&(&u[d] / contribution_rational(&snapped, d)));
            let m = m_est.round();
            if m < 1.0 || (m_est - m).abs() > 0.1 {
                float_u = Some(u.iter().map(to_f64).collect());
                break;
            }
            let mq = int(m as i64);
            for (nu, v) in u.iter_mut().enumerate() {
                *v -= &mq * contribution_rational(&snapped, nu);
            }
            for (nu, e) in explained.iter_mut().enumerate() {
                *e += m * contribution_float(to_f64(&snapped), nu).abs();
            }
            let angle = exact_angle(&snapped);
            steps.push(PeelStep {
                depth: d,
                ratio,
                angle,
                multiplicity: m as u32,
                multiplicity_residual: (m_est - m).abs(),
                exact: true,
            });
            record(&mut found, angle, m as u32);
            count += m as usize;
        }
    } else {
        let wf: Vec<f64> = w.values.iter().map(Scalar::to_f64).collect();
        float_u = Some(wf.windows(2).map(|p| p[1] - p[0]).collect());
    }

    if let Some(mut u) = float_u {
        let initial: Vec<f64> = u.iter().map(|v| v.abs()).collect();
        loop {
            let scale = |nu: usize| explained[nu] + initial[nu];
            let small = (0..u.len().min(2))
                .all(|nu| u[nu].abs() <= config.tol * scale(nu).max(f64::MIN_POSITIVE));
            if u.is_empty() || small || u.iter().all(|v| *v == 0.0) {
                break;
            }
            if count >= config.max_angles {
                return Err(Error::NonConvergent(format!(
                    "remainder {:.3e} above tolerance after {} angles",
                    u[0].abs() / scale(0),
                    count
                )));
            }
            let d = stable_depth(&u).ok_or_else(|| {
                let ratio = if u.len() > 1 { u[0] / u[1] } else { f64::NAN };
                Error::NegativeRatio { index: 1, ratio }
            })?;
            let ratio = u[d - 1] / u[d];
            let x = ratio.sqrt();
            if (x - 1.0).abs() < 1e-9 {
                return Err(Error::NonConvergent(
                    "remainder resembles a straight angle".into(),
                ));
            }
            let (xv, angle, exact) = match snap(x, config)? {
                Snapped::Exact(xs) => (to_f64(&xs), exact_angle(&xs), true),
                Snapped::Float => (x, Angle::radians(x * PI), false),
            };
            let m_est = u[d] / contribution_float(xv, d);
            let m = m_est.round();
            if m < 1.0 || (m_est - m).abs() > 0.1 {
                return Err(Error::NonConvergent(format!(
                    "multiplicity estimate {m_est:.4} at depth {d} is not an integer"
                )));
            }
            for (nu, v) in u.iter_mut().enumerate() {
                *v -= m * contribution_float(xv, nu);
                explained[nu] += m * contribution_float(xv, nu).abs();
            }
            steps.push(PeelStep {
                depth: d,
                ratio,
                angle,
                multiplicity: m as u32,
                multiplicity_residual: (m_est - m).abs(),
                exact,
            });
            record(&mut found, angle, m as u32);
            count += m as usize;
        }
    }

    let angles: Vec<(Angle, u32)> = found.into_iter().map(|(a, m)| (a.0, m)).collect();
    for pair in angles.windows(2) {
        let (a, b) = (pair[0].0.to_radians(), pair[1].0.to_radians());
        if b / a < 1.02 {
            warnings.push(format!(
                "angles {} and {} are within 2%; they may have merged",
                pair[0].0, pair[1].0
            ));
        }
    }
    Ok(AngleRecovery {
        angles,
        steps,
        warnings,
    })
}

/// Euler characteristic `(area kappa + sum (pi - angle)) / 2pi` and its
/// distance from the nearest integer. Straight angles do not change the sum,
/// so the invisible ones need not be known.
pub fn recover_euler(
    angles: &[(Angle, u32)],
    area: &Scalar,
    curvature: &Scalar,
) -> Result<(i64, f64)> {
    let exact = area.is_exact() && curvature.is_exact() && angles.iter().all(|(a, _)| a.is_exact());
    let mut total = area.mul(curvature).coerce(exact);
    for (a, m) in angles {
        let defect = match a.to_pipoly() {
            Some(p) if exact => Scalar::Exact(PiPoly::pi_power(2) - p),
            _ => Scalar::Float(PI - a.to_radians()),
        };
        total = total.add(&defect.scale(&int(*m as i64)));
    }
    let chi = total.shift(-2).scale(&rat(1, 2));
    if let Some(n) = chi.as_exact().and_then(PiPoly::as_integer) {
        return Ok((n, 0.0));
    }
    if chi.is_exact() {
        return Err(Error::NonIntegerEuler {
            value: chi.to_f64(),
        });
    }
    let v = chi.to_f64();
    let r = v.round();
    if (v - r).abs() > 1e-6 {
        return Err(Error::NonIntegerEuler { value: v });
    }
    Ok((r as i64, (v - r).abs()))
}

/// Reciprocal-angle sum of a flat polygon from its constant term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatReciprocal {
    /// `sum_i 1 / angle_i`.
    pub value: f64,
    /// Lower bound `M^2 / ((M - 2 chi) pi)`, attained exactly when all
    /// angles are equal.
    pub equiangular_value: f64,
    /// False when `c0 <= chi / 6`, which no flat polygon with a
    /// non-straight angle satisfies.
    pub admissible: bool,
}

/// `sum 1/angle = (24 c0 + M - 2 chi) / pi` for a flat polygon with `M`
/// vertices and Euler characteristic `chi`.
pub fn sum_reciprocal_angles(c0: f64, m: u32, chi: i64) -> FlatReciprocal {
    let mf = m as f64;
    let value = (24.0 * c0 + mf - 2.0 * chi as f64) / PI;
    let denom = (mf - 2.0 * chi as f64) * PI;
    FlatReciprocal {
        value,
        equiangular_value: if denom > 0.0 {
            mf * mf / denom
        } else {
            f64::INFINITY
        },
        admissible: c0 > chi as f64 / 6.0,
    }
}

/// Angle with its multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredAngle {
    pub angle: Angle,
    pub multiplicity: u32,
}

/// Everything recovered from a polygon series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredPolygon {
    pub area: Scalar,
    pub perimeter: Scalar,
    pub curvature: Scalar,
    pub angles: Vec<RecoveredAngle>,
    pub euler_char: i64,
    pub euler_residual: f64,
    pub diagnostics: Vec<PeelStep>,
    pub warnings: Vec<String>,
}

fn depth_of(series: &AsymptoticSeries) -> Result<usize> {
    if series.max_n() < 2 {
        return Err(Error::MissingCoefficient { n: 2 });
    }
    Ok((series.max_n() / 2) as usize)
}

/// Full polygon recovery; needs nonzero curvature.
pub fn recover_polygon(series: &AsymptoticSeries, config: &PeelConfig) -> Result<RecoveredPolygon> {
    let basic = recover_basic(series)?;
    if basic.curvature.is_zero() {
        return Err(Error::ZeroCurvature);
    }
    let order = depth_of(series)?;
    let v = recover_vertex_sums(series, &basic.area, &basic.curvature, order)?;
    let w = recover_w(&v)?;
    let rec = recover_angles(&w, config)?;
    let (euler_char, euler_residual) = recover_euler(&rec.angles, &basic.area, &basic.curvature)?;
    Ok(RecoveredPolygon {
        area: basic.area,
        perimeter: basic.perimeter,
        curvature: basic.curvature,
        angles: rec
            .angles
            .into_iter()
            .map(|(angle, multiplicity)| RecoveredAngle {
                angle,
                multiplicity,
            })
            .collect(),
        euler_char,
        euler_residual,
        diagnostics: rec.steps,
        warnings: rec.warnings,
    })
}

/// Everything recovered from an orbisurface series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredOrbifold {
    pub area: Scalar,
    pub mirror_length: Scalar,
    pub curvature: Scalar,
    /// Multiset of orders: each cone order twice, each dihedral half-order once.
    pub orders: Vec<u64>,
    /// Number of dihedral points plus twice the number of cone points.
    pub singular_weight: usize,
    pub diagnostics: Vec<PeelStep>,
    /// Parity remarks: a value occurring an odd number of times must come
    /// from at least one dihedral point.
    pub parity: Vec<String>,
}

/// Orbisurface recovery. The curvature is read from the mirror terms when the
/// mirror locus is nonempty and must be supplied otherwise.
pub fn recover_orbifold(
    series: &AsymptoticSeries,
    curvature: Option<Scalar>,
    config: &PeelConfig,
) -> Result<RecoveredOrbifold> {
    let area = require(series, -2)?.shift(2).scale(&int(4));
    let mirror_length = require(series, -1)?.shift(1).scale(&int(8));
    if mirror_length.signum() < 0 {
        return Err(Error::Domain(
            "negative half-power term: this is a boundary, not a mirror locus".into(),
        ));
    }
    let curvature = match curvature {
        Some(k) => k,
        None if !mirror_length.is_zero() => {
            div(&require(series, 1)?.scale(&int(4)), &series.coeff(-1))?
        }
        None => return Err(Error::ZeroPerimeterAmbiguous),
    };
    if curvature.is_zero() {
        return Err(Error::ZeroCurvature);
    }
    let order = depth_of(series)?;
    let v = recover_vertex_sums(series, &area, &curvature, order)?;
    let w = recover_w(&v)?;
    let rec = recover_angles(&w, config)?;
    let mut orders = Vec::new();
    let mut parity = Vec::new();
    for (a, m) in &rec.angles {
        let q = a
            .pi_ratio()
            .filter(|x| x.numer().is_positive() && x.numer() == &num_bigint::BigInt::from(1))
            .and_then(|x| x.denom().to_u64())
            .ok_or(Error::NonReciprocalAngle {
                value: a.to_radians(),
            })?;
        orders.extend(std::iter::repeat_n(q, *m as usize));
        if m % 2 == 1 {
            parity.push(format!(
                "order {q} occurs {m} times: at least one dihedral point of order {}",
                2 * q
            ));
        }
    }
    orders.sort_unstable();
    Ok(RecoveredOrbifold {
        area,
        mirror_length,
        curvature,
        singular_weight: orders.len(),
        orders,
        diagnostics: rec.steps,
        parity,
    })
}

/// Leading weight `a_(nu,nu+1) = (-1)^nu B_(2nu+2) / (4 (nu+1)! (2nu+1))`.
pub fn leading_weight(nu: usize) -> Rational {
    vertex_weight(nu, nu + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolygonSpec;
    use crate::invariants::{lune_polygon, polygon_series, round_sphere, vertex_coeff};
    use crate::numkit::{bernoulli_number, inv_factorial, sign};

    fn square() -> PolygonSpec {
        PolygonSpec::new(
            Scalar::integer(0),
            Scalar::integer(1),
            Scalar::integer(4),
            vec![Angle::exact(1, 2); 4],
        )
    }

    #[test]
    fn basic_square() {
        let s = polygon_series(&square(), 8).unwrap();
        let b = recover_basic(&s).unwrap();
        assert_eq!(b.area, Scalar::integer(1));
        assert_eq!(b.perimeter, Scalar::integer(4));
        assert_eq!(b.curvature, Scalar::integer(0));
    }

    #[test]
    fn basic_sphere_and_lune() {
        let s = polygon_series(&round_sphere(int(1)), 4).unwrap();
        let b = recover_basic(&s).unwrap();
        assert_eq!(b.area, Scalar::Exact(PiPoly::monomial(int(4), 2)));
        assert!(b.perimeter.is_zero());
        assert_eq!(b.curvature, Scalar::integer(1));
        let lune = lune_polygon(2, int(1)).unwrap();
        let b = recover_basic(&polygon_series(&lune, 4).unwrap()).unwrap();
        assert_eq!(b.area, Scalar::Exact(PiPoly::pi_power(2)));
        assert_eq!(b.perimeter, Scalar::Exact(PiPoly::monomial(int(2), 2)));
        assert_eq!(b.curvature, Scalar::integer(1));
        let closed = polygon_series(&round_sphere(int(1)), -1).unwrap();
        assert_eq!(recover_basic(&closed), Err(Error::ZeroPerimeterAmbiguous));
    }

    #[test]
    fn missing_coefficient() {
        let s = polygon_series(&square(), -2).unwrap();
        assert_eq!(recover_basic(&s), Err(Error::MissingCoefficient { n: -1 }));
    }

    #[test]
    fn leading_weight_formula() {
        for nu in 0..25 {
            let expect = sign(nu) * bernoulli_number(2 * nu + 2) * inv_factorial(nu + 1)
                / int(4 * (2 * nu as i64 + 1));
            assert_eq!(leading_weight(nu), expect, "nu = {nu}");
        }
        // the index-shifted form with B_(2nu) disagrees already at nu = 1
        let shifted = -bernoulli_number(2) * inv_factorial(2) / int(12);
        assert_ne!(leading_weight(1), shifted);
    }

    #[test]
    fn w_of_single_angle() {
        let v: Vec<Scalar> = (0..8)
            .map(|nu| vertex_coeff(nu, &Angle::exact(2, 5)))
            .collect();
        let w = recover_w(&v).unwrap();
        assert_eq!(w, WSequence::from_angles(&[Angle::exact(2, 5)], 7));
        let g = 0.4 * PI;
        for (nu, wv) in w.values.iter().enumerate() {
            let e = 2 * nu as i32 + 1;
            let expect = (PI.powi(e + 1) - g.powi(e + 1)) / (PI * g.powi(e));
            assert!((wv.to_f64() - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    #[test]
    fn straight_angles_give_zero_w() {
        let w = WSequence::from_angles(&[Angle::exact(1, 1); 3], 10);
        assert!(w.values.iter().all(Scalar::is_zero));
        let rec = recover_angles(&w, &PeelConfig::default()).unwrap();
        assert!(rec.angles.is_empty());
    }

    #[test]
    fn w0_of_pair() {
        let w = WSequence::from_angles(&[Angle::exact(1, 2), Angle::exact(1, 3)], 0);
        let direct: f64 = [PI / 2.0, PI / 3.0]
            .iter()
            .map(|g| (PI * PI - g * g) / (PI * g))
            .sum();
        assert!((w.values[0].to_f64() - direct).abs() < 1e-14);
    }

    #[test]
    fn peel_single_and_triple() {
        let w = WSequence::from_angles(&[Angle::exact(1, 2)], 20);
        let rec = recover_angles(&w, &PeelConfig::default()).unwrap();
        assert_eq!(rec.angles, vec![(Angle::exact(1, 2), 1)]);
        let w = WSequence::from_angles(
            &[Angle::exact(1, 2), Angle::exact(1, 2), Angle::exact(2, 3)],
            40,
        );
        let rec = recover_angles(&w, &PeelConfig::default()).unwrap();
        assert_eq!(
            rec.angles,
            vec![(Angle::exact(1, 2), 2), (Angle::exact(2, 3), 1)]
        );
    }

    #[test]
    fn peel_close_reciprocal_angles() {
        let angles: Vec<Angle> = [3, 4, 4, 6, 7, 7]
            .iter()
            .map(|&q| Angle::pi_over(q))
            .collect();
        let w = WSequence::from_angles(&angles, 30);
        let rec = recover_angles(&w, &PeelConfig::reciprocal()).unwrap();
        let mut got: Vec<(Angle, u32)> = rec.angles.clone();
        got.sort_by(|a, b| a.0.to_radians().total_cmp(&b.0.to_radians()));
        let want = vec![
            (Angle::pi_over(7), 2),
            (Angle::pi_over(6), 1),
            (Angle::pi_over(4), 2),
            (Angle::pi_over(3), 1),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn peel_float_angles() {
        let angles = [Angle::radians(0.9), Angle::radians(2.1)];
        let w = WSequence::from_angles(&angles, 14);
        let rec = recover_angles(&w, &PeelConfig::default()).unwrap();
        assert_eq!(rec.angles.len(), 2);
        for ((a, m), g) in rec.angles.iter().zip([0.9, 2.1]) {
            assert_eq!(*m, 1);
            assert!((a.to_radians() - g).abs() < 1e-6, "{a}");
        }
    }

    #[test]
    fn euler_of_square_and_triangle() {
        let (chi, r) = recover_euler(
            &[(Angle::exact(1, 2), 4)],
            &Scalar::integer(1),
            &Scalar::integer(0),
        )
        .unwrap();
        assert_eq!((chi, r), (1, 0.0));
        let area = Scalar::Exact(PiPoly::monomial(rat(1, 42), 2));
        let angles = [
            (Angle::exact(1, 2), 1),
            (Angle::exact(1, 3), 1),
            (Angle::exact(1, 7), 1),
        ];
        assert_eq!(
            recover_euler(&angles, &area, &Scalar::integer(-1))
                .unwrap()
                .0,
            1
        );
        assert!(recover_euler(&angles, &area, &Scalar::integer(1)).is_err());
    }

    #[test]
    fn flat_reciprocal_sum() {
        let s = polygon_series(&square(), 0).unwrap();
        let r = sum_reciprocal_angles(s.coeff(0).to_f64(), 4, 1);
        assert!((r.value - 8.0 / PI).abs() < 1e-14);
        assert!((r.equiangular_value - r.value).abs() < 1e-14);
        assert!(r.admissible);
        assert!(!sum_reciprocal_angles(0.1, 4, 1).admissible);
    }

    #[test]
    fn flat_polygon_refuses_angle_recovery() {
        let s = polygon_series(&square(), 8).unwrap();
        assert_eq!(
            recover_polygon(&s, &PeelConfig::default()),
            Err(Error::ZeroCurvature)
        );
        let b = recover_basic(&s).unwrap();
        let v = recover_vertex_sums(&s, &b.area, &b.curvature, 0).unwrap();
        let e0 = 4.0 * (PI * PI - PI * PI / 4.0) / (24.0 * PI * PI / 2.0);
        assert!((v[0].to_f64() - e0).abs() < 1e-15);
    }
}

//! Closed-form heat invariants and truncated series for polygons, spheres,
//! lunes and orbisurfaces.
//!
//! Vertex coefficients are rational for exact angles `(p/q) pi` because the
//! angle only enters through `(1 - x^(2j)) / x^(2j-1)` with `x = angle / pi`.

use crate::error::{Error, Result};
use crate::geometry::{Angle, AsymptoticSeries, OrbisurfaceSpec, PolygonSpec};
use crate::numkit::{
    bernoulli_at_half, bernoulli_number, binomial, from_f64, int, inv_factorial, pi_rational, pow,
    pow4, rat, sign, to_f64, Memo, PiPoly, Rational, Scalar,
};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Default truncation: exponents up to `t^10`.
pub const DEFAULT_MAX_N: i32 = 20;

fn big(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// Interior coefficient `f_nu`.
pub fn area_coeff(nu: usize) -> Rational {
    static TABLE: OnceLock<Memo<Rational>> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            Memo::new(|known: &[Rational]| {
                let nu = known.len();
                let mut acc = Rational::zero();
                for l in 0..=nu {
                    let term =
                        big_binom(nu, l) * pow(&int(-4), l as i32) * bernoulli_at_half(2 * l);
                    acc += term;
                }
                acc * inv_factorial(nu) / pow4(nu)
            })
        })
        .get(nu)
}

fn big_binom(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n as u64, k as u64))
}

/// Boundary coefficient `r_nu = -1 / (4^nu nu!)`.
pub fn boundary_coeff(nu: usize) -> Rational {
    -inv_factorial(nu) / pow4(nu)
}

/// Weight of `(1 - x^(2j)) / x^(2j-1)` in the wedge coefficient `c^H_l`.
fn hyper_weight(l: usize, j: usize) -> Rational {
    big_binom(2 * l + 2, 2 * j)
        * bernoulli_at_half(2 * l + 2 - 2 * j)
        * bernoulli_number(2 * j)
        * inv_factorial(l + 1)
        / int(4 * (2 * l as i64 + 1))
}

fn vertex_rows() -> &'static Memo<Vec<Rational>> {
    static TABLE: OnceLock<Memo<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Memo::new(|known: &[Vec<Rational>]| {
            let nu = known.len();
            (1..=nu + 1)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for l in (j - 1)..=nu {
                        acc += pow(&int(-4), l as i32) * inv_factorial(nu - l) * hyper_weight(l, j);
                    }
                    acc / pow4(nu)
                })
                .collect()
        })
    })
}

/// Coefficient of `W_(j-1)` in `e_nu`, for `1 <= j <= nu + 1`:
/// `e_nu(angle) = sum_j vertex_weight(nu, j) * (1 - x^(2j)) / x^(2j-1)`.
pub fn vertex_weight(nu: usize, j: usize) -> Rational {
    assert!(
        (1..=nu + 1).contains(&j),
        "vertex_weight index out of range"
    );
    vertex_rows().get(nu)[j - 1].clone()
}

/// All weights of row `nu`, `j = 1..=nu+1`.
pub fn vertex_weight_row(nu: usize) -> Vec<Rational> {
    vertex_rows().get(nu)
}

/// `angle / pi` as a rational: exact for exact angles, a ~110 digit
/// approximation for float angles.
fn pi_fraction(angle: &Angle) -> Rational {
    match angle.pi_ratio() {
        Some(q) => q,
        None => from_f64(angle.to_radians()).unwrap_or_else(Rational::zero) / pi_rational(),
    }
}

/// `(1 - x^(2j)) / x^(2j-1)` for `j = 1..=count`.
fn w_terms(x: &Rational, count: usize) -> Vec<Rational> {
    let x2 = x * x;
    let mut out = Vec::with_capacity(count);
    let mut xp = x.clone(); // x^(2j-1)
    for _ in 0..count {
        let top = int(1) - &xp * x;
        out.push(top / &xp);
        xp *= &x2;
    }
    out
}

fn finish(value: Rational, exact: bool) -> Scalar {
    if exact {
        Scalar::rational(value)
    } else {
        Scalar::Float(to_f64(&value))
    }
}

/// Vertex coefficient `e_nu(angle)`: exact for exact angles, otherwise
/// evaluated with a ~110 digit pi before rounding.
pub fn vertex_coeff(nu: usize, angle: &Angle) -> Scalar {
    let x = pi_fraction(angle);
    let row = vertex_weight_row(nu);
    let w = w_terms(&x, nu + 1);
    let value: Rational = row.iter().zip(&w).map(|(a, b)| a * b).sum();
    finish(value, angle.is_exact())
}

/// Wedge coefficient `c^H_l(angle)` from its defining double sum.
pub fn hyper_vertex_coeff(l: usize, angle: &Angle) -> Scalar {
    let x = pi_fraction(angle);
    let mut acc = Rational::zero();
    for j in 1..=l + 1 {
        let w = (int(1) - pow(&x, 2 * j as i32)) / pow(&x, 2 * j as i32 - 1);
        acc += big_binom(2 * l + 2, 2 * j)
            * bernoulli_at_half(2 * l + 2 - 2 * j)
            * bernoulli_number(2 * j)
            * w;
    }
    let value = acc * inv_factorial(l + 1) / int(4 * (2 * l as i64 + 1));
    finish(value, angle.is_exact())
}

/// Small sphere coefficient `i^(s)_l = (-1)^(l+1) B_(2l+2)(1/2) / (l+1)!`, `l >= -1`.
pub fn sphere_small_coeff(l: i64) -> Rational {
    assert!(l >= -1, "sphere_small_coeff needs l >= -1");
    let m = (l + 1) as usize;
    sign(m) * inv_factorial(m) * bernoulli_at_half(2 * m)
}

/// Sphere coefficient `i^S_nu = sum_(l=0)^(nu+1) i^(s)_(nu-l) / (4^l l!)`, `nu >= -1`.
pub fn sphere_interior_coeff(nu: i64) -> Rational {
    assert!(nu >= -1, "sphere_interior_coeff needs nu >= -1");
    (0..=(nu + 1) as usize)
        .map(|l| sphere_small_coeff(nu - l as i64) * inv_factorial(l) / pow4(l))
        .sum()
}

fn lune_row_cache() -> &'static Mutex<HashMap<u64, Vec<Rational>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<Rational>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn lune_coeff_direct(l: usize, k: u64) -> Rational {
    let kk = big(k) * big(k);
    let mut acc = Rational::zero();
    let mut kpow = int(1); // k^(2j)
    for j in 0..=l + 1 {
        acc += big_binom(2 * l + 2, 2 * j)
            * (&kpow - int(1))
            * bernoulli_number(2 * j)
            * bernoulli_at_half(2 * l + 2 - 2 * j);
        kpow *= &kk;
    }
    acc * sign(l) * inv_factorial(l + 1) / (big(4 * k) * int(2 * l as i64 + 1))
}

/// Lune vertex coefficient `c^S_l(pi/k)`, curvature-free.
pub fn lune_coeff_cs(l: usize, k: u64) -> Rational {
    assert!(k >= 1, "lune_coeff_cs needs k >= 1");
    let mut cache = lune_row_cache().lock().unwrap_or_else(|e| e.into_inner());
    let row = cache.entry(k).or_default();
    while row.len() <= l {
        let next = lune_coeff_direct(row.len(), k);
        row.push(next);
    }
    row[l].clone()
}

fn check_order(max_n: i32) -> Result<()> {
    if max_n < -2 {
        return Err(Error::Domain(format!(
            "truncation order {max_n} is below -2"
        )));
    }
    Ok(())
}

/// Highest integer power `nu` with `t^nu` inside `max_n`.
fn top_integer(max_n: i32) -> i64 {
    (max_n as i64).div_euclid(2)
}

/// Adds `(area / 4pi) f_nu kappa^nu t^(nu-1)`.
fn add_interior(series: &mut AsymptoticSeries, area: &Scalar, kappa: &Scalar) {
    let base = area.shift(-2).scale(&rat(1, 4));
    for nu in 0..=(top_integer(series.max_n()) + 1).max(0) as usize {
        let n = 2 * nu as i32 - 2;
        let c = base.mul(&kappa.powi(nu as u32)).scale(&area_coeff(nu));
        series.add_to(n, &c);
    }
}

/// Adds `(length / (8 sqrt pi)) r_nu kappa^nu t^(nu - 1/2)`, times `sign`.
fn add_boundary(series: &mut AsymptoticSeries, length: &Scalar, kappa: &Scalar, sign: i64) {
    let base = length.shift(-1).scale(&rat(sign, 8));
    let mut nu = 0usize;
    while 2 * nu as i32 - 1 <= series.max_n() {
        let c = base.mul(&kappa.powi(nu as u32)).scale(&boundary_coeff(nu));
        series.add_to(2 * nu as i32 - 1, &c);
        nu += 1;
    }
}

/// Adds `e_nu(angle) kappa^nu t^nu`.
fn add_vertex(series: &mut AsymptoticSeries, angle: &Angle, kappa: &Scalar) {
    if angle.is_straight() && angle.is_exact() {
        return;
    }
    for nu in 0..=top_integer(series.max_n()).max(-1) {
        let nu = nu as usize;
        let c = vertex_coeff(nu, angle).mul(&kappa.powi(nu as u32));
        series.add_to(2 * nu as i32, &c);
    }
}

/// Heat-trace expansion of a constant-curvature polygon, truncated at
/// `t^(max_n/2)`.
pub fn polygon_series(spec: &PolygonSpec, max_n: i32) -> Result<AsymptoticSeries> {
    spec.check()?;
    check_order(max_n)?;
    let exact = spec.is_exact();
    let kappa = spec.curvature.clone().coerce(exact);
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(kappa.clone());
    add_interior(&mut s, &spec.area, &kappa);
    add_boundary(&mut s, &spec.perimeter, &kappa, 1);
    for a in &spec.angles {
        add_vertex(&mut s, a, &kappa);
    }
    Ok(s)
}

fn is_minus_one(kappa: &Scalar) -> bool {
    match kappa {
        Scalar::Exact(p) => p == &PiPoly::integer(-1),
        Scalar::Float(x) => *x == -1.0,
    }
}

/// Hyperbolic polygon expansion assembled from the wedge coefficients
/// `i^H_k`, `b^H_k`, `nu^H_k`; requires curvature exactly -1.
pub fn hyper_series_legacy(spec: &PolygonSpec, max_n: i32) -> Result<AsymptoticSeries> {
    spec.check()?;
    check_order(max_n)?;
    if !is_minus_one(&spec.curvature) {
        return Err(Error::WrongCurvature);
    }
    let exact = spec.is_exact();
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(spec.curvature.clone());
    let area_4pi = spec.area.shift(-2).scale(&rat(1, 4));
    s.add_to(-2, &area_4pi);
    s.add_to(-1, &spec.perimeter.shift(-1).scale(&rat(-1, 8)));
    let quarter = rat(-1, 4);
    for k in 0..=top_integer(max_n).max(0) as usize {
        // i^H_k
        let mut sum = Rational::zero();
        for l in 0..=k + 1 {
            sum +=
                big_binom(k + 1, l) * pow(&quarter, (k + 1 - l) as i32) * bernoulli_at_half(2 * l);
        }
        s.add_to(2 * k as i32, &area_4pi.scale(&(sum * inv_factorial(k + 1))));
        // nu^H_k per angle
        for a in &spec.angles {
            let mut acc = Scalar::zero(a.is_exact());
            for l in 0..=k {
                let w = inv_factorial(k - l) * pow(&quarter, (k - l) as i32);
                acc = acc.add(&hyper_vertex_coeff(l, a).scale(&w));
            }
            s.add_to(2 * k as i32, &acc);
        }
        // b^H_k
        let b = sign(k) * inv_factorial(k + 1) / (pow4(k + 2) * int(2));
        s.add_to(2 * k as i32 + 1, &spec.perimeter.shift(-1).scale(&b));
    }
    Ok(s)
}

/// Contribution of a cone point of order `n`; zero for `n = 1`.
pub fn cone_contribution(n: u32, kappa: &Scalar, max_n: i32) -> Result<AsymptoticSeries> {
    check_order(max_n)?;
    let exact = kappa.is_exact();
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(kappa.clone());
    for nu in 0..=top_integer(max_n).max(-1) {
        let nu = nu as usize;
        let mut acc = Rational::zero();
        for l in 0..=nu {
            acc += int(2) * inv_factorial(l) / pow4(l) * lune_coeff_cs(nu - l, n as u64);
        }
        s.add_to(2 * nu as i32, &kappa.powi(nu as u32).scale(&acc));
    }
    Ok(s)
}

/// Contribution of a dihedral point of isotropy order `2m`.
pub fn dihedral_contribution(m: u32, kappa: &Scalar, max_n: i32) -> Result<AsymptoticSeries> {
    Ok(cone_contribution(m, kappa, max_n)?.scaled(&rat(1, 2)))
}

/// Contribution of a mirror locus of total length `length` (positive sign).
pub fn mirror_contribution(
    length: &Scalar,
    kappa: &Scalar,
    max_n: i32,
) -> Result<AsymptoticSeries> {
    check_order(max_n)?;
    if length.signum() < 0 {
        return Err(Error::Domain("mirror length must be nonnegative".into()));
    }
    let exact = length.is_exact() && kappa.is_exact();
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(kappa.clone());
    // |N| / sqrt(4 pi) * kappa^nu / (4^(nu+1) nu!)
    let base = length.shift(-1).scale(&rat(1, 2));
    let mut nu = 0usize;
    while 2 * nu as i32 - 1 <= max_n {
        let w = inv_factorial(nu) / pow4(nu + 1);
        s.add_to(
            2 * nu as i32 - 1,
            &base.mul(&kappa.powi(nu as u32)).scale(&w),
        );
        nu += 1;
    }
    Ok(s)
}

/// Heat-trace expansion of a closed orbisurface.
pub fn orbifold_series(spec: &OrbisurfaceSpec, max_n: i32) -> Result<AsymptoticSeries> {
    spec.check()?;
    check_order(max_n)?;
    let exact = spec.is_exact();
    let kappa = spec.curvature.clone().coerce(exact);
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(kappa.clone());
    add_interior(&mut s, &spec.area, &kappa);
    s = s.plus(&mirror_contribution(&spec.mirror_length, &kappa, max_n)?)?;
    for &n in &spec.cone_orders {
        s = s.plus(&cone_contribution(n, &kappa, max_n)?)?;
    }
    for &m in &spec.dihedral_half_orders {
        s = s.plus(&dihedral_contribution(m, &kappa, max_n)?)?;
    }
    Ok(s)
}

/// Dirichlet heat-trace expansion of the spherical lune of angle `pi/k`.
///
/// In exact mode `kappa` must be a perfect square so that `sqrt(kappa)` is exact.
pub fn lune_series(k: u32, kappa: &Scalar, max_n: i32) -> Result<AsymptoticSeries> {
    check_order(max_n)?;
    if k < 1 || kappa.signum() <= 0 {
        return Err(Error::Domain("lune needs k >= 1 and kappa > 0".into()));
    }
    let root = kappa
        .sqrt()
        .ok_or_else(|| Error::Domain("exact lune needs a perfect-square curvature".into()))?;
    let exact = kappa.is_exact();
    let mut s = AsymptoticSeries::new(-2, max_n, exact).with_curvature(kappa.clone());
    let inv_kappa = Scalar::one(exact)
        .checked_div(kappa)
        .ok_or_else(|| Error::Domain("curvature is not invertible".into()))?;
    let inv_root = Scalar::one(exact)
        .checked_div(&root)
        .ok_or_else(|| Error::Domain("curvature is not invertible".into()))?;
    s.add_to(-2, &inv_kappa.scale(&rat(1, 2 * k as i64)));
    s.add_to(-1, &inv_root.shift(1).scale(&rat(-1, 4)));
    let mut nu = 0usize;
    while 2 * nu as i32 <= max_n {
        let kp = kappa.powi(nu as u32);
        let mut bracket = sphere_interior_coeff(nu as i64) / int(2 * k as i64);
        for l in 0..=nu {
            bracket += int(2) * lune_coeff_cs(nu - l, k as u64) * inv_factorial(l) / pow4(l);
        }
        s.add_to(2 * nu as i32, &kp.scale(&bracket));
        let half = -inv_factorial(nu + 1) / (pow4(nu + 1) * int(4));
        s.add_to(2 * nu as i32 + 1, &kp.mul(&root).shift(1).scale(&half));
        nu += 1;
    }
    Ok(s)
}

/// `pi * q` as an exact scalar.
fn pi_times(q: Rational) -> Scalar {
    Scalar::Exact(PiPoly::monomial(q, 2))
}

/// Round sphere of curvature `kappa` as a closed polygon (no boundary).
pub fn round_sphere(kappa: Rational) -> PolygonSpec {
    PolygonSpec::new(
        Scalar::rational(kappa.clone()),
        pi_times(int(4) / kappa),
        Scalar::integer(0),
        vec![],
    )
}

/// The lune of angle `pi/k` on the sphere of curvature `kappa` as a
/// two-vertex polygon; `kappa` must be a perfect square.
pub fn lune_polygon(k: u32, kappa: Rational) -> Option<PolygonSpec> {
    let kap = Scalar::rational(kappa.clone());
    let root = kap.sqrt()?;
    let perimeter = Scalar::Exact(PiPoly::monomial(int(2), 2)).checked_div(&root)?;
    Some(PolygonSpec::new(
        kap,
        pi_times(int(2) / (int(k as i64) * kappa)),
        perimeter,
        vec![Angle::pi_over(k as u64); 2],
    ))
}

/// Quotient of the sphere of curvature `kappa` by the rotation group `Z_k`.
pub fn sphere_mod_cyclic(k: u32, kappa: Rational) -> OrbisurfaceSpec {
    OrbisurfaceSpec {
        curvature: Scalar::rational(kappa.clone()),
        area: pi_times(int(4) / (int(k as i64) * kappa)),
        mirror_length: Scalar::integer(0),
        cone_orders: vec![k, k],
        dihedral_half_orders: vec![],
    }
}

/// Quotient of the sphere of curvature `kappa` by the dihedral group `D_k`;
/// `kappa` must be a perfect square.
pub fn sphere_mod_dihedral(k: u32, kappa: Rational) -> Option<OrbisurfaceSpec> {
    let kap = Scalar::rational(kappa.clone());
    let root = kap.sqrt()?;
    Some(OrbisurfaceSpec {
        curvature: kap,
        area: pi_times(int(2) / (int(k as i64) * kappa)),
        mirror_length: Scalar::Exact(PiPoly::monomial(int(2), 2)).checked_div(&root)?,
        cone_orders: vec![],
        dihedral_half_orders: vec![k, k],
    })
}

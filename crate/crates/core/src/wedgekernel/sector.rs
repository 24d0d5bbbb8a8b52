//! Vertex contribution of a hyperbolic wedge and the truncated heat trace of
//! a wedge of angle `pi / k` built from images.

use super::kernel::heat_kernel_h2;
use super::quad::{integrate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::fitting::{fit_series, log_grid, FitConfig, FitResult};
use crate::numkit::{bernoulli_number, inv_factorial, to_f64};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Number of terms of the small-`u` series of the coth difference.
const SERIES_TERMS: usize = 18;

/// `B_(2n) / (2n)!` for `n = 1..=SERIES_TERMS`.
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=SERIES_TERMS)
            .map(|n| to_f64(&(bernoulli_number(2 * n) * inv_factorial(2 * n))))
            .collect()
    })
}

/// `(c coth(c u / 2) - coth(u / 2)) / (2 sinh(u / 2))`, finite at `u = 0`.
fn vertex_integrand(c: f64, u: f64) -> f64 {
    let scale = c.max(1.0) * u;
    if scale < 1.0 {
        // c coth(c u/2) - coth(u/2) = (2/u) sum_n B_2n u^2n (c^2n - 1) / (2n)!
        let (u2, c2) = (u * u, c * c);
        let (mut up, mut cp, mut acc) = (1.0, 1.0, 0.0);
        for b in bernoulli_over_factorial() {
            up *= u2;
            cp *= c2;
            acc += b * up * (cp - 1.0);
        }
        // (2/u) acc / (2 sinh(u/2)) = acc / (u sinh(u/2))
        let half = 0.5 * u;
        let sinhc = if half == 0.0 { 1.0 } else { half.sinh() / half };
        acc / (u * u * 0.5 * sinhc)
    } else {
        (c / (0.5 * c * u).tanh() - 1.0 / (0.5 * u).tanh()) / (2.0 * (0.5 * u).sinh())
    }
}

fn check_gamma(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 2.0 * PI) {
        return Err(Error::Domain(format!(
            "wedge angle must lie in (0, 2 pi], got {gamma}"
        )));
    }
    Ok(PI / gamma)
}

/// Vertex term of the wedge trace,
/// `(gamma / 2 pi) int_0^inf e^(-u^2/4t) / sqrt(4 pi t) e^(u/2) / (e^u - 1)
/// ((pi/gamma) coth(pi u / 2 gamma) - coth(u/2)) du`.
pub fn vertex_term_integral(gamma: f64, t: f64) -> Result<f64> {
    let c = check_gamma(gamma)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if c == 1.0 {
        return Ok(0.0);
    }
    // u = 2 sqrt(t) v turns the Gaussian into e^(-v^2); e^(-64) is negligible
    let st = t.sqrt();
    let f = |v: f64| (-v * v).exp() * vertex_integrand(c, 2.0 * st * v);
    let spec = QuadratureSpec {
        abs: 0.0,
        rel: 1e-14,
        max_intervals: 4000,
    };
    let r = integrate(f, 0.0, 8.0, &spec)?;
    Ok(gamma / (2.0 * PI) / PI.sqrt() * r.value)
}

/// Default window for vertex fits: 14 times in `[0.005, 0.05]` with basis
/// `1, t, .., t^5`.
pub fn vertex_fit_config() -> FitConfig {
    FitConfig::new(log_grid(0.005, 0.05, 14), vec![0, 2, 4, 6, 8, 10])
}

/// Fits the vertex term on the configured grid. The integral expands in
/// integer powers of `t`, so the fitted coefficients of `t^0` and `t^1`
/// approximate the vertex invariants of the angle.
pub fn vertex_fit(gamma: f64, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let samples = config
        .t_grid
        .par_iter()
        .map(|&t| Ok((t, vertex_term_integral(gamma, t)?)))
        .collect::<Result<Vec<_>>>()?;
    fit_series(&samples, config)
}

/// Parts of the truncated wedge trace `int_(B_r cap W) K_W(x, x; t) dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorTrace {
    /// Identity image: area times the on-diagonal kernel.
    pub area_term: f64,
    /// Rotated images, depending only on the radius.
    pub rotation_term: f64,
    /// Reflected images; enters the trace with a minus sign.
    pub reflection_term: f64,
}

impl SectorTrace {
    pub fn total(&self) -> f64 {
        self.area_term + self.rotation_term - self.reflection_term
    }

    /// Trace minus the area term.
    pub fn image_part(&self) -> f64 {
        self.rotation_term - self.reflection_term
    }
}

fn sector_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs: 0.0,
        rel: 1e-12,
        max_intervals: 4000,
    }
}

/// `acosh(cosh r / cosh s)` for `0 <= s <= r` without cancellation near `s = r`.
fn chord_half_length(r: f64, s: f64) -> f64 {
    let x = 2.0 * (0.5 * (r + s)).sinh() * (0.5 * (r - s)).sinh() / s.cosh();
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Sum over the reflected images. The reflections of the `k` wedge copies
/// tile the half-disk of radius `r`; in Fermi coordinates about the
/// diameter the image distance is twice the distance to the diameter.
pub fn sector_reflection_term(r: f64, t: f64) -> Result<f64> {
    let f = |s: f64| {
        heat_kernel_h2(2.0 * s, t).unwrap_or(f64::NAN) * s.cosh() * 2.0 * chord_half_length(r, s)
    };
    let v = integrate(f, 0.0, r, &sector_spec())?.value;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::QuadratureFailure {
            estimate: v,
            error: f64::NAN,
        })
    }
}

/// Sum over the rotated images `x -> rotation by 2 m pi / k`, `m = 1..k-1`.
pub fn sector_rotation_term(k: u32, r: f64, t: f64) -> Result<f64> {
    let gamma = PI / k as f64;
    let mut total = 0.0;
    for m in 1..k {
        let sm = (m.min(k - m) as f64 * gamma).sin();
        let f = |a: f64| {
            let d = 2.0 * (a.sinh() * sm).asinh();
            heat_kernel_h2(d, t).unwrap_or(f64::NAN) * a.sinh()
        };
        total += gamma * integrate(f, 0.0, r, &sector_spec())?.value;
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::QuadratureFailure {
            estimate: total,
            error: f64::NAN,
        })
    }
}

fn check_sector(k: u32, r: f64, t: f64) -> Result<()> {
    if k < 2 {
        return Err(Error::Domain("sector trace needs k >= 2".into()));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// The three parts of the truncated trace of the wedge of angle `pi / k`.
pub fn wedge_sector_parts(k: u32, r: f64, t: f64) -> Result<SectorTrace> {
    check_sector(k, r, t)?;
    let gamma = PI / k as f64;
    let area = gamma * 2.0 * (0.5 * r).sinh().powi(2);
    Ok(SectorTrace {
        area_term: area * heat_kernel_h2(0.0, t)?,
        rotation_term: sector_rotation_term(k, r, t)?,
        reflection_term: sector_reflection_term(r, t)?,
    })
}

/// `int_(B_r cap W) K_W(x, x; t) dx` for the wedge of angle `pi / k`.
pub fn wedge_sector_trace(k: u32, r: f64, t: f64) -> Result<f64> {
    Ok(wedge_sector_parts(k, r, t)?.total())
}

/// Default window for sector fits: 14 times in `[0.002, 0.04]` with the
/// half-integer basis `t^(-1/2) .. t^2`.
pub fn sector_fit_config() -> FitConfig {
    FitConfig::new(log_grid(0.002, 0.04, 14), vec![-1, 0, 1, 2, 3, 4])
}

/// Fits `e^(t/4)` times the image part of the sector trace. The boundary
/// rays contribute half-integer powers, the vertex integer powers, so the
/// `t^0` coefficient isolates the vertex constant.
pub fn sector_fit(k: u32, r: f64, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    check_sector(k, r, config.t_grid[0])?;
    let samples = config
        .t_grid
        .par_iter()
        .map(|&t| {
            let p = wedge_sector_parts(k, r, t)?;
            Ok((t, (t / 4.0).exp() * p.image_part()))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_series(&samples, config)
}

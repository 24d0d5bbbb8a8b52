//! Heat kernel of the hyperbolic plane and its half-plane and wedge
//! image sums.

use super::legendre::conical_p;
use super::quad::{integrate, QuadratureSpec};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A point of the hyperbolic plane in geodesic polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    /// Geodesic distance to the base point.
    pub a: f64,
    /// Polar angle in `[0, 2 pi)`.
    pub alpha: f64,
}

impl HPoint {
    pub fn new(a: f64, alpha: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("invalid polar point ({a}, {alpha})")));
        }
        Ok(Self {
            a,
            alpha: alpha.rem_euclid(2.0 * PI),
        })
    }
}

/// `sinh(d/2)` for two points given by radii and angular separation.
fn half_distance_sinh(a: f64, b: f64, delta: f64) -> f64 {
    let s = (0.5 * (a - b)).sinh();
    let h = (0.5 * delta).sin();
    (s * s + a.sinh() * b.sinh() * h * h).sqrt()
}

/// Geodesic distance, computed through `sinh(d/2)` to stay accurate for
/// nearby points.
pub fn hyp_distance(x: &HPoint, y: &HPoint) -> f64 {
    2.0 * half_distance_sinh(x.a, y.a, x.alpha - y.alpha).asinh()
}

fn polar_distance(a: f64, alpha: f64, b: f64, beta: f64) -> f64 {
    2.0 * half_distance_sinh(a, b, alpha - beta).asinh()
}

/// Tolerances used inside kernel evaluations.
pub(crate) fn kernel_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs: 0.0,
        rel: 1e-13,
        max_intervals: 4000,
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("t must be positive, got {t}")))
    }
}

/// `ln(2 sinh x)` for `x > 0` without overflow.
fn ln_two_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p()
    } else {
        (2.0 * x.sinh()).ln()
    }
}

/// Shifted kernel `e^(t/4) K(d; t)` from the integral over `rho >= d`, with
/// `rho = d + u^2` removing the endpoint singularity.
pub fn heat_kernel_h2_shifted(d: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::Domain(format!(
            "distance must be nonnegative, got {d}"
        )));
    }
    // beyond u_max the Gaussian factor is below e^(-60)
    let u_max = (-d + (d * d + 240.0 * t).sqrt()).sqrt();
    let g = |u: f64| {
        let u2 = u * u;
        let gauss = (-(2.0 * d * u2 + u2 * u2) / (4.0 * t)).exp();
        if gauss == 0.0 {
            return 0.0;
        }
        // ln(2 sinh(d + u^2/2) sinh(u^2/2)) = ln(2 sinh A) + ln(2 sinh B) - ln 2
        let ln_den = ln_two_sinh(d + 0.5 * u2) + ln_two_sinh(0.5 * u2) - 2f64.ln();
        2.0 * u * (d + u2) * gauss * (-0.5 * ln_den).exp()
    };
    let r = integrate(g, 0.0, u_max, &kernel_spec())?;
    let pre = 2f64.sqrt() / (4.0 * PI * t).powf(1.5) * (-d * d / (4.0 * t)).exp();
    Ok(pre * r.value)
}

/// Heat kernel `K(d; t)` of the hyperbolic plane of curvature `-1`.
pub fn heat_kernel_h2(d: f64, t: f64) -> Result<f64> {
    Ok((-t / 4.0).exp() * heat_kernel_h2_shifted(d, t)?)
}

/// The same kernel from its spectral representation
/// `(1/2 pi) int e^(-(1/4 + rho^2) t) P_(-1/2 + i rho)(cosh d) rho tanh(pi rho) d rho`.
pub fn heat_kernel_h2_spectral(d: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    // |P_(-1/2 + i rho)| <= P_(-1/2) bounds the inner error scale near zeros in rho
    let modulus = conical_p(0.0, d, &QuadratureSpec::new(1e-16, 1e-14))?;
    let inner_abs = 1e-14 * modulus;
    let inner = QuadratureSpec::new(inner_abs, 1e-13);
    // |P| <= 1 so the tail beyond R is at most e^(-R^2 t) / (4 pi t)
    let eps = 1e-15;
    let r_max = ((1.0 / (4.0 * PI * t * eps)).ln().max(1.0) / t).sqrt();
    let f = |rho: f64| -> f64 {
        let p = conical_p(rho, d, &inner).unwrap_or(f64::NAN);
        (-rho * rho * t).exp() * p * rho * (PI * rho).tanh()
    };
    // int_0^inf rho e^(-rho^2 t) d rho = 1 / 2t scales the inherited inner error
    let outer = QuadratureSpec {
        abs: 1e-15f64.max(inner_abs / (2.0 * t)),
        rel: 1e-12,
        max_intervals: 4000,
    };
    let r = integrate(f, 0.0, r_max, &outer)?;
    if !r.value.is_finite() {
        return Err(Error::QuadratureFailure {
            estimate: r.value,
            error: r.error,
        });
    }
    Ok((-t / 4.0).exp() * r.value / (2.0 * PI))
}

/// Total mass `2 pi int_0^inf K(d; t) sinh d dd`, equal to one.
pub fn heat_kernel_mass(t: f64) -> Result<f64> {
    check_time(t)?;
    // K(d) sinh d behaves like exp(-d^2/4t + d/2); cut where that is e^(-50)
    let d_max = t + (t * t + 200.0 * t).sqrt();
    let f = |d: f64| heat_kernel_h2(d, t).unwrap_or(f64::NAN) * d.sinh();
    let r = integrate(f, 0.0, d_max, &QuadratureSpec::new(1e-14, 1e-11))?;
    Ok(2.0 * PI * r.value)
}

/// Dirichlet heat kernel of the half-plane `0 < alpha < pi` by reflection
/// of `y` in the boundary geodesic.
pub fn half_plane_kernel(x: &HPoint, y: &HPoint, t: f64) -> Result<f64> {
    for p in [x, y] {
        if p.alpha > PI {
            return Err(Error::Domain(format!(
                "point angle {} outside [0, pi]",
                p.alpha
            )));
        }
    }
    let direct = heat_kernel_h2(hyp_distance(x, y), t)?;
    let mirror = heat_kernel_h2(polar_distance(x.a, x.alpha, y.a, -y.alpha), t)?;
    Ok(direct - mirror)
}

/// Image angles `theta_j`, `j = 1..2k`, with signs `(-1)^(j+1)`.
pub fn wedge_images(k: u32, theta: f64) -> Vec<(f64, f64)> {
    let gamma = PI / k as f64;
    (1..=2 * k)
        .map(|j| {
            if j % 2 == 1 {
                ((j - 1) as f64 * gamma + theta, 1.0)
            } else {
                (j as f64 * gamma - theta, -1.0)
            }
        })
        .collect()
}

/// Dirichlet heat kernel of the wedge of angle `pi / k` by the method of
/// images. `k = 1` gives the half-plane.
pub fn wedge_kernel_images(k: u32, x: &HPoint, y: &HPoint, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("wedge needs k >= 1".into()));
    }
    let gamma = PI / k as f64;
    for p in [x, y] {
        if p.alpha > gamma {
            return Err(Error::Domain(format!(
                "point angle {} outside [0, pi/{k}]",
                p.alpha
            )));
        }
    }
    let mut sum = 0.0;
    for (theta, sign) in wedge_images(k, y.alpha) {
        sum += sign * heat_kernel_h2(polar_distance(x.a, x.alpha, y.a, theta), t)?;
    }
    Ok(sum)
}

/// Largest `|K_W(x, y; t)|` over `samples` random pairs with one point on a
/// boundary ray of the wedge of angle `pi / k` and the other inside.
pub fn max_boundary_value(k: u32, samples: usize, seed: u64, t: f64) -> Result<f64> {
    let gamma = PI / k as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let inside = HPoint::new(rng.gen_range(0.05..2.0), rng.gen_range(0.01..0.99) * gamma)?;
        let ray = if i % 2 == 0 { 0.0 } else { gamma };
        let edge = HPoint::new(rng.gen_range(0.05..2.0), ray)?;
        let (x, y) = if i % 4 < 2 {
            (inside, edge)
        } else {
            (edge, inside)
        };
        worst = worst.max(wedge_kernel_images(k, &x, &y, t)?.abs());
    }
    Ok(worst)
}

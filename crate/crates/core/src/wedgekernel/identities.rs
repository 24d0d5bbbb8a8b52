//! Numerical checks of the Mehler-type product integral and of the
//! Laplace transform of the heat kernel against Legendre functions.

use super::kernel::heat_kernel_h2_shifted;
use super::legendre::{
    legendre_q_shifted, product_bound_parts, q_modulus, q_pair_product, PairTolerance,
};
use super::quad::{integrate, QuadratureSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Both sides of an identity with the quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / |rhs|`.
    pub residual: f64,
    /// Error estimate of the outer quadrature plus the certified tail bound.
    pub error_estimate: f64,
    /// Upper limit of the truncated outer integral.
    pub cutoff: f64,
}

fn inner_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs: 1e-18,
        rel: 1e-12,
        max_intervals: 12,
    }
}

/// Smallest `R` (on a doubling-then-bisecting search) with
/// `(2/pi) A (c + R)^p e^(-sigma R) / (sigma - p / (c + R)) <= target`.
fn mehler_cutoff(a_coef: f64, c: f64, p: f64, sigma: f64, target: f64) -> f64 {
    let tail = |r: f64| {
        let slack = sigma - p / (c + r);
        if slack <= 0.0 {
            return f64::INFINITY;
        }
        2.0 / PI * a_coef * (c + r).powf(p) * (-sigma * r).exp() / slack
    };
    let mut hi = 1.0;
    while tail(hi) > target {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Checks `(2/pi) int_0^inf cosh(rho (pi - theta)) Q_nu^(-i rho)(cosh a) Q_nu^(i rho)(cosh b) d rho
/// = Q_nu(cosh a cosh b - sinh a sinh b cos theta)`.
pub fn mehler_identity(nu: f64, theta: f64, a: f64, b: f64) -> Result<IdentityCheck> {
    if !(nu > -1.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("nu must exceed -1, got {nu}")));
    }
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::Domain(format!(
            "theta must lie in (0, 2 pi), got {theta}"
        )));
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("radii must be positive".into()));
    }
    let nu_c = Complex64::new(nu, 0.0);
    // cosh d - 1 = 2 sinh^2(d/2)
    let s = (0.5 * (a - b)).sinh();
    let h = (0.5 * theta).sin();
    let sh2 = s * s + a.sinh() * b.sinh() * h * h;
    let d_minus_one = 2.0 * sh2;
    let spec = inner_spec();
    let rhs = legendre_q_shifted(nu_c, Complex64::new(0.0, 0.0), d_minus_one, &spec)?.re;

    let za = 2.0 * (0.5 * a).sinh().powi(2);
    let zb = 2.0 * (0.5 * b).sinh().powi(2);
    let (a_coef, c, p) = product_bound_parts(nu_c, za + 1.0, zb + 1.0);
    let growth = (PI - theta).abs();
    let sigma = PI - growth;
    let target = 1e-9 * rhs.abs();
    let cutoff = mehler_cutoff(a_coef, c, p, sigma, target / 10.0);
    let tail = target / 10.0;
    // pointwise errors below this keep the integrated error under target / 10
    let tol = PairTolerance {
        abs: PI / 2.0 * target / (100.0 * cutoff),
        modulus_z: q_modulus(nu_c, za, &spec)?,
        modulus_w: q_modulus(nu_c, zb, &spec)?,
    };

    let f = |rho: f64| -> Complex64 {
        // cosh(rho g) = e^(rho g) (1 + e^(-2 rho g)) / 2
        let ln_shift = rho * growth + (-2.0 * rho * growth).exp().ln_1p() - 2f64.ln();
        q_pair_product(nu_c, rho, za, zb, ln_shift, Some(tol), &spec)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let outer = QuadratureSpec {
        abs: target / 10.0,
        rel: 1e-10,
        max_intervals: 2000,
    };
    let r = integrate(f, 0.0, cutoff, &outer)?;
    let lhs = 2.0 / PI * r.value;
    if !lhs.norm().is_finite() {
        return Err(Error::QuadratureFailure {
            estimate: lhs.norm(),
            error: r.error,
        });
    }
    let residual = (lhs - rhs).norm() / rhs.abs();
    Ok(IdentityCheck {
        lhs: lhs.re,
        rhs,
        residual,
        error_estimate: 2.0 / PI * r.error + tail + target / 100.0,
        cutoff,
    })
}

/// `|LHS - RHS| / |RHS|` of the Mehler-type identity.
pub fn mehler_identity_residual(nu: f64, theta: f64, a: f64, b: f64) -> Result<f64> {
    Ok(mehler_identity(nu, theta, a, b)?.residual)
}

/// Shifted Green's function of the plane, `(1/2 pi) Q_(sqrt(s) - 1/2)(cosh d)`.
pub fn green_plane(d: f64, s: f64) -> Result<f64> {
    if !(s > 0.25 && s.is_finite()) {
        return Err(Error::Domain(format!("s must exceed 1/4, got {s}")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("d must be positive, got {d}")));
    }
    let nu = Complex64::new(s.sqrt() - 0.5, 0.0);
    let dm1 = 2.0 * (0.5 * d).sinh().powi(2);
    Ok(legendre_q_shifted(nu, Complex64::new(0.0, 0.0), dm1, &inner_spec())?.re / (2.0 * PI))
}

/// Checks `int_0^inf e^(-s t) e^(t/4) K(d; t) dt = (1/2 pi) Q_(sqrt(s) - 1/2)(cosh d)`.
pub fn green_plane_check(d: f64, s: f64) -> Result<IdentityCheck> {
    let rhs = green_plane(d, s)?;
    let target = 1e-9 * rhs;
    // e^(t/4) K(d; t) <= 1 / (4 pi t), so the tail past T is below e^(-sT) / (4 pi s T)
    let tail = |big_t: f64| (-s * big_t).exp() / (4.0 * PI * s * big_t);
    let mut cutoff = 1.0;
    while tail(cutoff) > target / 10.0 {
        cutoff *= 1.25;
    }
    let f = |t: f64| (-s * t).exp() * heat_kernel_h2_shifted(d, t).unwrap_or(f64::NAN);
    let spec = QuadratureSpec {
        abs: target / 10.0,
        rel: 1e-10,
        max_intervals: 2000,
    };
    let r = integrate(f, 0.0, cutoff, &spec)?;
    if !r.value.is_finite() {
        return Err(Error::QuadratureFailure {
            estimate: r.value,
            error: r.error,
        });
    }
    Ok(IdentityCheck {
        lhs: r.value,
        rhs,
        residual: (r.value - rhs).abs() / rhs.abs(),
        error_estimate: r.error + tail(cutoff),
        cutoff,
    })
}

/// Relative residual of the Green's function identity.
pub fn green_plane_residual(d: f64, s: f64) -> Result<f64> {
    Ok(green_plane_check(d, s)?.residual)
}

/// Parameter sample `(nu, theta, a, b)` for the Mehler identity, covering
/// half-integer, integer and negative orders, `theta` in `[pi/3, 5 pi/3]`,
/// the straight angle and equal radii.
pub const MEHLER_SAMPLE: [(f64, f64, f64, f64); 10] = [
    (0.5, PI / 2.0, 0.7, 1.2),
    (0.0, PI, 0.4, 0.9),
    (1.5, 2.0, 0.8, 0.8),
    (-0.3, 2.5, 0.6, 1.0),
    (1.0, PI / 3.0, 1.1, 0.5),
    (2.0, 4.0, 0.9, 1.4),
    (0.25, 5.0 * PI / 3.0, 0.5, 0.7),
    (-0.6, 3.5, 1.0, 0.6),
    (0.75, 1.2, 0.3, 0.3),
    (3.0, 3.0, 1.3, 1.6),
];

/// Parameter sample `(d, s)` for the Green's function identity.
pub const GREEN_SAMPLE: [(f64, f64); 6] = [
    (1.0, 1.0),
    (0.5, 0.5),
    (2.0, 1.0),
    (1.0, 3.0),
    (0.3, 2.0),
    (1.5, 0.75),
];

/// Mehler checks over a parameter list, in parallel.
pub fn mehler_suite(points: &[(f64, f64, f64, f64)]) -> Vec<Result<IdentityCheck>> {
    points
        .par_iter()
        .map(|&(nu, th, a, b)| mehler_identity(nu, th, a, b))
        .collect()
}

/// Green's function checks over a parameter list, in parallel.
pub fn green_suite(points: &[(f64, f64)]) -> Vec<Result<IdentityCheck>> {
    points
        .par_iter()
        .map(|&(d, s)| green_plane_check(d, s))
        .collect()
}

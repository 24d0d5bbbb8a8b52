//! Complex log-Gamma, associated Legendre functions of the second kind via
//! their Euler-type integral, and conical functions.

use super::quad::{tanh_sinh, QuadratureSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln sin(pi z)` without overflow for large `|Im z|`; the imaginary part
/// is determined up to multiples of `2 pi`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 10.0 {
        return (z * PI).sin().ln();
    }
    // sin(pi z) = (e^(i pi z) - e^(-i pi z)) / 2i; keep the dominant exponential
    if z.im > 0.0 {
        let e = (i * 2.0 * PI * z).exp();
        -i * PI * z + (Complex64::new(1.0, 0.0) - e).ln() - (i * 2.0).ln() + Complex64::new(0.0, PI)
    } else {
        let e = (-i * 2.0 * PI * z).exp();
        i * PI * z + (Complex64::new(1.0, 0.0) - e).ln() - (i * 2.0).ln()
    }
}

/// `ln Gamma(z)` by the Lanczos approximation (g = 7, nine terms) with
/// reflection for `Re z < 1/2`. The imaginary part is determined up to
/// multiples of `2 pi`, which is all exponentiation needs.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0)
            - ln_sin_pi(z)
            - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Real `ln |Gamma(x)|`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// `J(nu, mu, z) = int_0^pi sin(t)^(2 nu + 1) (z + cos t)^(mu - nu - 1) dt`,
/// with `z - 1` passed separately for accuracy near `z = 1`.
pub(crate) fn q_integral(
    nu: Complex64,
    mu: Complex64,
    z_minus_one: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let p = 2.0 * nu + 1.0;
    let q = mu - nu - 1.0;
    let f = |_: f64, dl: f64, dr: f64| -> Complex64 {
        let s = dl.min(dr).sin();
        let half = (0.5 * dr).sin();
        // z + cos t = (z - 1) + 2 sin^2((pi - t) / 2)
        let base = z_minus_one + 2.0 * half * half;
        (p * s.ln() + q * base.ln()).exp()
    };
    Ok(tanh_sinh(f, 0.0, PI, spec)?.value)
}

/// Logarithm of the prefactor `e^(mu pi i) 2^(-nu-1) Gamma(nu+1+mu)/Gamma(nu+1) (z^2-1)^(-mu/2)`.
pub(crate) fn q_ln_prefactor(nu: Complex64, mu: Complex64, z_minus_one: f64) -> Complex64 {
    let z2m1 = z_minus_one * (z_minus_one + 2.0);
    mu * Complex64::new(0.0, PI) - (nu + 1.0) * 2f64.ln() + ln_gamma(nu + 1.0 + mu)
        - ln_gamma(nu + 1.0)
        - mu * 0.5 * z2m1.ln()
}

fn check_q_domain(nu: Complex64, mu: Complex64, z_minus_one: f64) -> Result<()> {
    if !(nu.re > -1.0) {
        return Err(Error::Domain(format!(
            "Legendre Q needs Re nu > -1, got {nu}"
        )));
    }
    if !(mu.re >= 0.0) {
        return Err(Error::Domain(format!(
            "Legendre Q needs Re mu >= 0, got {mu}"
        )));
    }
    if !(z_minus_one > 0.0 && z_minus_one.is_finite()) {
        return Err(Error::Domain("Legendre Q needs z > 1".into()));
    }
    Ok(())
}

/// `Q_nu^mu(z)` for `Re nu > -1`, `Re mu >= 0`, `z > 1`, given `z - 1`.
pub fn legendre_q_shifted(
    nu: Complex64,
    mu: Complex64,
    z_minus_one: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_q_domain(nu, mu, z_minus_one)?;
    let j = q_integral(nu, mu, z_minus_one, spec)?;
    Ok(q_ln_prefactor(nu, mu, z_minus_one).exp() * j)
}

/// `Q_nu^mu(z)` for `Re nu > -1`, `Re mu >= 0`, `z > 1`.
pub fn legendre_q(
    nu: Complex64,
    mu: Complex64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    legendre_q_shifted(nu, mu, z - 1.0, spec)
}

/// `int_0^pi |sin(t)^(2 nu + 1) (z + cos t)^(mu - nu - 1)| dt` for imaginary
/// `mu`, which does not depend on `mu` and bounds `|J|`.
pub(crate) fn q_modulus(nu: Complex64, z_minus_one: f64, spec: &QuadratureSpec) -> Result<f64> {
    let p = 2.0 * nu.re + 1.0;
    let q = -nu.re - 1.0;
    let f = |_: f64, dl: f64, dr: f64| -> f64 {
        let s = dl.min(dr).sin();
        let half = (0.5 * dr).sin();
        let base = z_minus_one + 2.0 * half * half;
        (p * s.ln() + q * base.ln()).exp()
    };
    Ok(tanh_sinh(f, 0.0, PI, spec)?.value)
}

/// Accuracy request for [`q_pair_product`]: an absolute tolerance on the
/// shifted product and the modulus integrals of both factors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairTolerance {
    pub abs: f64,
    pub modulus_z: f64,
    pub modulus_w: f64,
}

/// `Q_nu^(-i rho)(z) Q_nu^(i rho)(w)`, with the growing and decaying
/// exponentials combined in log space and an extra factor `e^(shift)`.
/// With a [`PairTolerance`], each integral only needs the absolute accuracy
/// that keeps the product within `abs`, since `J` decays through
/// cancellation that no relative target can resolve at large `rho`.
pub(crate) fn q_pair_product(
    nu: Complex64,
    rho: f64,
    z_minus_one: f64,
    w_minus_one: f64,
    ln_shift: f64,
    tol: Option<PairTolerance>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let mu = Complex64::new(0.0, rho);
    let ln = q_ln_prefactor(nu, -mu, z_minus_one) + q_ln_prefactor(nu, mu, w_minus_one) + ln_shift;
    let scale = ln.re.exp();
    let (spec_a, spec_b) = match tol {
        Some(t) => {
            if scale * t.modulus_z * t.modulus_w <= t.abs {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let loosen = |m: f64| QuadratureSpec {
                abs: spec.abs.max(t.abs / (2.0 * scale * m)),
                ..*spec
            };
            (loosen(t.modulus_w), loosen(t.modulus_z))
        }
        None => (*spec, *spec),
    };
    let ja = q_integral(nu, -mu, z_minus_one, &spec_a)?;
    let jb = q_integral(nu, mu, w_minus_one, &spec_b)?;
    Ok(ln.exp() * ja * jb)
}

/// Upper bound on `|Q_nu^(-i rho)(z) Q_nu^(i rho)(w)| e^(pi rho)` of the form
/// `A (|nu| + 1 + rho)^p`, returned as `(A, c, p)` with `c = |nu| + 1`.
pub fn product_bound_parts(nu: Complex64, z: f64, w: f64) -> (f64, f64, f64) {
    let g2 = (2.0 * ln_gamma(nu + 1.0).re).exp();
    let c = nu.norm() + 1.0;
    let p = 2.0 * nu.norm() + 1.0;
    if nu.re >= -0.5 {
        let mut a = PI.powi(4) / ((z - 1.0).sqrt() * (w - 1.0).sqrt()) / g2;
        if nu.re >= 0.0 {
            let alt = ((z + 1.0) / (z - 1.0)).ln() * ((w + 1.0) / (w - 1.0)).ln() * PI * PI / g2;
            a = a.min(alt);
        }
        (a, c, p)
    } else {
        let r = nu.re + 1.0;
        let a = PI.powi(3) * (1.0 / (3.0 * r)).exp()
            / (g2 * ((z - 1.0) * (w - 1.0)).powf(r) * r.powf(1.0 - 2.0 * nu.re));
        (a, c, 0.0)
    }
}

/// The product bound evaluated at `rho`.
pub fn product_bound(nu: Complex64, rho: f64, z: f64, w: f64) -> f64 {
    let (a, c, p) = product_bound_parts(nu, z, w);
    a * (c + rho).powf(p) * (-PI * rho).exp()
}

/// Conical function `P_(-1/2 + i rho)(cosh d)` from the Mehler–Dirichlet
/// integral `(sqrt 2 / pi) int_0^d cos(rho s) / sqrt(cosh d - cosh s) ds`.
pub fn conical_p(rho: f64, d: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!(
            "distance must be nonnegative, got {d}"
        )));
    }
    if d == 0.0 {
        return Ok(1.0);
    }
    // cosh d - cosh s = 2 sinh((d + s)/2) sinh((d - s)/2)
    let f = |s: f64, _: f64, to_d: f64| {
        (rho * s).cos() / (2.0 * (0.5 * (d + s)).sinh() * (0.5 * to_d).sinh()).sqrt()
    };
    Ok(std::f64::consts::SQRT_2 / PI * tanh_sinh(f, 0.0, d, spec)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_special_values() {
        assert!((ln_gamma(c(0.5, 0.0)).re - PI.sqrt().ln()).abs() < 1e-14);
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(c(n as f64, 0.0)).re - fact.ln()).abs() < 1e-13 * fact.ln().max(1.0));
            fact *= n as f64;
        }
        for &y in &[0.3, 1.0, 4.0, 25.0, 80.0] {
            let lhs = 2.0 * ln_gamma(c(0.0, y)).re;
            let rhs = PI.ln() - y.ln() - (PI * y).sinh().ln();
            assert!(
                (lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0),
                "i y, y = {y}"
            );
            let lhs = 2.0 * ln_gamma(c(0.5, y)).re;
            let rhs = PI.ln() - (PI * y).cosh().ln();
            assert!(
                (lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0),
                "1/2 + i y, y = {y}"
            );
        }
    }

    #[test]
    fn gamma_recurrence() {
        for &z in &[c(0.3, 0.7), c(-0.4, 2.0), c(2.5, -3.0), c(0.9, 30.0)] {
            let d = (ln_gamma(z + 1.0) - ln_gamma(z) - z.ln()).exp();
            assert!((d - 1.0).norm() < 1e-13, "z = {z}");
        }
    }

    #[test]
    fn q_zero_closed_form() {
        let spec = QuadratureSpec::new(1e-15, 1e-13);
        for &z in &[1.5, 3.0] {
            let q = legendre_q(c(0.0, 0.0), c(0.0, 0.0), z, &spec).unwrap();
            let exact = 0.5 * ((z + 1.0) / (z - 1.0)).ln();
            assert!((q.re - exact).abs() < 1e-12 && q.im.abs() < 1e-14);
        }
        // Q_1(z) = z Q_0(z) - 1
        let z = 2.0;
        let q1 = legendre_q(c(1.0, 0.0), c(0.0, 0.0), z, &spec).unwrap();
        let exact = z * 0.5 * ((z + 1.0) / (z - 1.0)).ln() - 1.0;
        assert!((q1.re - exact).abs() < 1e-12);
    }

    #[test]
    fn q_domain_errors() {
        let spec = QuadratureSpec::default();
        assert!(legendre_q(c(-1.5, 0.0), c(0.0, 0.0), 2.0, &spec).is_err());
        assert!(legendre_q(c(0.0, 0.0), c(0.0, 0.0), 1.0, &spec).is_err());
    }

    #[test]
    fn conjugate_pair_is_real_nonnegative() {
        let spec = QuadratureSpec::new(1e-15, 1e-12);
        for &(nu, rho, z) in &[
            (0.5, 1.0, 1.3),
            (0.0, 3.0, 2.0),
            (1.5, 0.5, 1.1),
            (-0.3, 2.0, 1.8),
        ] {
            let nu = c(nu, 0.0);
            let a = legendre_q(nu, c(0.0, -rho), z, &spec).unwrap();
            let b = legendre_q(nu, c(0.0, rho), z, &spec).unwrap();
            let p = a * b;
            assert!(p.im.abs() <= 1e-10 * p.norm() && p.re >= 0.0, "{p}");
            let direct = q_pair_product(nu, rho, z - 1.0, z - 1.0, 0.0, None, &spec).unwrap();
            assert!((direct - p).norm() <= 1e-10 * p.norm());
        }
    }

    #[test]
    fn product_obeys_bound() {
        let spec = QuadratureSpec::new(1e-16, 1e-12);
        for &nu in &[-0.7, -0.3, 0.0, 0.5, 1.5] {
            for &(z, w) in &[(1.2, 1.9), (3.0, 1.05)] {
                for rho in [0.0, 0.5, 2.0, 6.0, 12.0] {
                    let nu = c(nu, 0.0);
                    let p = q_pair_product(nu, rho, z - 1.0, w - 1.0, 0.0, None, &spec).unwrap();
                    assert!(
                        p.norm() <= product_bound(nu, rho, z, w),
                        "nu={nu} rho={rho}"
                    );
                }
            }
        }
    }

    #[test]
    fn conical_at_zero_distance_is_one() {
        let spec = QuadratureSpec::new(1e-15, 1e-13);
        assert!((conical_p(3.0, 0.0, &spec).unwrap() - 1.0).abs() < 1e-14);
        // P_(-1/2)(cosh d) lies in (0, 1]
        let v = conical_p(0.0, 1.0, &spec).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }
}

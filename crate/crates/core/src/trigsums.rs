//! Finite cosecant-power sums `sum_j sin(j pi / k)^(-2n)` and the
//! Bernoulli identities that evaluate them.

use crate::error::{Error, Result};
use crate::numkit::{
    bernoulli_at_half, bernoulli_number, binomial, binomial_half, factorial, int, inv_factorial,
    pow4, to_f64, CompensatedSum, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::f64::consts::PI;

/// Coefficient `d_k(eta)` of `r^eta` in `sinh(r)^k`:
/// `(1 / (2^k eta!)) sum_p C(k, p) (-1)^p (k - 2p)^eta`.
pub fn d_coeff(k: usize, eta: usize) -> Rational {
    let mut acc = BigInt::zero();
    for p in 0..=k {
        let base = BigInt::from(k as i64 - 2 * p as i64);
        let term = binomial(k as u64, p as u64) * num_traits::pow(base, eta);
        if p % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Rational::new(acc, BigInt::one() << k) * inv_factorial(eta)
}

/// Table of `d_k(eta)` for `k, eta <= max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DCoeffTable {
    max: usize,
    values: Vec<Rational>,
}

impl DCoeffTable {
    pub fn new(max: usize) -> Self {
        let mut values = Vec::with_capacity((max + 1) * (max + 1));
        for k in 0..=max {
            for eta in 0..=max {
                values.push(d_coeff(k, eta));
            }
        }
        Self { max, values }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn get(&self, k: usize, eta: usize) -> Option<&Rational> {
        if k > self.max || eta > self.max {
            return None;
        }
        self.values.get(k * (self.max + 1) + eta)
    }
}

/// `c_l(s) = sum_tau C(1/2, tau) (-1)^(l - tau) s^(-2(l - tau) - 2)` for `s` in `(0, 1]`.
pub fn c_ell_c(l: usize, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Domain(format!("c_l needs s in (0, 1], got {s}")));
    }
    let inv2 = 1.0 / (s * s);
    let mut acc = CompensatedSum::new();
    for tau in 0..=l {
        let m = l - tau;
        let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sgn * to_f64(&binomial_half(tau)) * inv2.powi(m as i32 + 1));
    }
    Ok(acc.value())
}

/// `sin(j pi / k)` evaluated on the nearer half so small values keep full
/// relative accuracy.
fn sin_fraction(j: usize, k: usize) -> f64 {
    let jj = j.min(k - j);
    (PI * jj as f64 / k as f64).sin()
}

/// `sum_(j=1)^(k-1) sin(j pi / k)^(-2n)` with compensated summation.
pub fn trig_sum_direct(k: usize, n: u32) -> f64 {
    assert!(k >= 2, "trig_sum_direct needs k >= 2");
    let mut acc = CompensatedSum::new();
    for j in 1..k {
        acc.add(sin_fraction(j, k).powi(-2 * n as i32));
    }
    acc.value()
}

/// `C_(l,k) = sum_(j=1)^(k-1) c_l(sin(j pi / k))`, assembled from the power sums.
pub fn c_ell_k(l: usize, k: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for tau in 0..=l {
        let m = l - tau;
        let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(sgn * to_f64(&binomial_half(tau)) * trig_sum_direct(k, m as u32 + 1));
    }
    acc.value()
}

/// Exact Bernoulli side of the identity of order `eta`:
/// `sum_(l=1)^(eta+1) C(2eta+2, 2l) B_(2eta-2l+2)(1/2) B_(2l) (k^(2l) - 1)`.
pub fn identity_lhs(k: usize, eta: usize) -> Rational {
    let kk = int(k as i64) * int(k as i64);
    let mut kpow = int(1);
    let mut acc = Rational::zero();
    for l in 1..=eta + 1 {
        kpow *= &kk;
        acc += Rational::from_integer(binomial(2 * eta as u64 + 2, 2 * l as u64))
            * bernoulli_at_half(2 * eta + 2 - 2 * l)
            * bernoulli_number(2 * l)
            * (&kpow - int(1));
    }
    acc
}

/// Trigonometric side: `((2eta+2)! / 4^(eta+1)) sum_(l=0)^eta C_(l,k) d_(2l)(2eta)`.
pub fn identity_rhs(k: usize, eta: usize) -> f64 {
    let pre = to_f64(&(Rational::from_integer(factorial(2 * eta + 2)) / pow4(eta + 1)));
    let mut acc = CompensatedSum::new();
    for l in 0..=eta {
        let d = d_coeff(2 * l, 2 * eta);
        if !d.is_zero() {
            acc.add(c_ell_k(l, k) * to_f64(&d));
        }
    }
    pre * acc.value()
}

/// `|LHS - RHS| / max(1, |LHS|)` for the identity of order `eta`.
pub fn identity_residual(k: usize, eta: usize) -> f64 {
    assert!(k >= 2, "identity_residual needs k >= 2");
    let lhs = to_f64(&identity_lhs(k, eta));
    let rhs = identity_rhs(k, eta);
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

/// Closed form of `sum_j sin(j pi / k)^(-2n)` for `n` in `{1, 2, 3}`.
pub fn closed_sum(n: u32, k: usize) -> Result<Rational> {
    let k = int(k as i64);
    let k2 = &k * &k - int(1);
    let k4 = num_traits::pow(k.clone(), 4) - int(1);
    let k6 = num_traits::pow(k, 6) - int(1);
    let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
    match n {
        1 => Ok(k2 / int(3)),
        2 => Ok(r(1, 45) * k4 + r(2, 9) * k2),
        3 => Ok(r(2, 945) * k6 + r(1, 45) * k4 + r(8, 45) * k2),
        _ => Err(Error::UnsupportedPower(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::rat;

    /// `d_k(eta)` from the composition form: sum over ordered tuples of odd
    /// parts of `eta` of `prod 1/l_j!`, built by repeated series products.
    fn d_by_compositions(k: usize, eta: usize) -> Rational {
        let odd: Vec<Rational> = (0..=eta)
            .map(|l| {
                if l % 2 == 1 {
                    inv_factorial(l)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut poly = vec![Rational::zero(); eta + 1];
        poly[0] = int(1);
        for _ in 0..k {
            let mut next = vec![Rational::zero(); eta + 1];
            for (i, a) in poly.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in odd.iter().enumerate().take(eta + 1 - i) {
                    next[i + j] += a * b;
                }
            }
            poly = next;
        }
        poly[eta].clone()
    }

    #[test]
    fn d_examples() {
        assert_eq!(d_coeff(0, 0), int(1));
        assert_eq!(d_coeff(3, 2), int(0));
        assert_eq!(d_coeff(2, 4), rat(1, 3));
    }

    #[test]
    fn d_matches_compositions() {
        for k in 0..=12 {
            for eta in 0..=12 {
                assert_eq!(
                    d_coeff(k, eta),
                    d_by_compositions(k, eta),
                    "k={k} eta={eta}"
                );
            }
        }
    }

    #[test]
    fn d_series_matches_sinh_power() {
        let table = DCoeffTable::new(20);
        for &r in &[0.1f64, 0.5] {
            for k in 0..=6 {
                let s: f64 = (0..=20)
                    .map(|eta| to_f64(table.get(k, eta).unwrap()) * r.powi(eta as i32))
                    .sum();
                let exact = r.sinh().powi(k as i32);
                assert!((s - exact).abs() <= 1e-12, "r={r} k={k}: {s} vs {exact}");
            }
        }
        assert!(table.get(21, 0).is_none());
    }

    #[test]
    fn d_even_on_odd_vanishes() {
        for l in 0..6 {
            for eta in 0..6 {
                assert!(d_coeff(2 * l, 2 * eta + 1).is_zero());
            }
        }
    }

    #[test]
    fn c_ell_examples() {
        assert_eq!(c_ell_c(0, 1.0).unwrap(), 1.0);
        let s = 0.3;
        assert!((c_ell_c(0, s).unwrap() - 1.0 / (s * s)).abs() < 1e-12);
        let expect = 0.5 / (s * s) - 1.0 / s.powi(4);
        assert!((c_ell_c(1, s).unwrap() - expect).abs() < 1e-12);
        assert!(c_ell_c(1, 0.0).is_err());
        assert!(c_ell_c(1, 1.5).is_err());
    }

    #[test]
    fn direct_examples() {
        assert!((trig_sum_direct(2, 1) - 1.0).abs() < 1e-15);
        assert!((trig_sum_direct(3, 1) - 8.0 / 3.0).abs() < 1e-14);
        assert!((trig_sum_direct(4, 2) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn closed_examples() {
        assert_eq!(closed_sum(1, 3).unwrap(), rat(8, 3));
        assert_eq!(closed_sum(2, 2).unwrap(), int(1));
        assert_eq!(closed_sum(3, 2).unwrap(), int(1));
        assert_eq!(closed_sum(4, 2), Err(Error::UnsupportedPower(4)));
    }

    #[test]
    fn identity_examples() {
        assert!(identity_residual(2, 0) <= 1e-12);
        assert!(identity_residual(7, 3) <= 1e-10);
        for k in 2..20 {
            // order zero reduces to the sum of cosecant squares
            let lhs = to_f64(&identity_lhs(k, 0));
            assert!((lhs - 0.5 * trig_sum_direct(k, 1)).abs() <= 1e-12 * lhs.max(1.0));
        }
    }
}

//! Exact rational arithmetic: Bernoulli numbers, their values at 1/2,
//! binomials and factorials, plus the exact `PiPoly` and mixed `Scalar`
//! value types used by every coefficient formula.

mod memo;
mod pipoly;
mod scalar;

pub use memo::Memo;
pub use pipoly::PiPoly;
pub use scalar::{format_float, Scalar};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Arbitrary-precision fraction, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Builds `num/den` as a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational value of a finite `f64` (every finite double is dyadic).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// `q^e` for a signed integer exponent.
pub fn pow(q: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

/// `4^n` as a rational.
pub fn pow4(n: usize) -> Rational {
    Rational::from_integer(BigInt::one() << (2 * n))
}

/// `(-1)^n` as a rational.
pub fn sign(n: usize) -> Rational {
    if n % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn bernoulli_table() -> &'static Memo<Rational> {
    static TABLE: OnceLock<Memo<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Memo::new(|known: &[Rational]| {
            let m = known.len();
            if m == 0 {
                return int(1);
            }
            if m > 1 && m % 2 == 1 {
                return Rational::zero();
            }
            // sum_{j<m} C(m+1, j) B_j, with the row built incrementally
            let mut acc = Rational::zero();
            let mut c = BigInt::one();
            for (j, b) in known.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(c.clone());
                }
                c = c * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            -acc / int(m as i64 + 1)
        })
    })
}

fn half_table() -> &'static Memo<Rational> {
    static TABLE: OnceLock<Memo<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Memo::new(|known: &[Rational]| {
            let k = known.len();
            let b = bernoulli_number(k);
            // 2^{1-k} - 1
            let factor = if k == 0 {
                int(1)
            } else {
                Rational::new(BigInt::one(), BigInt::one() << (k - 1)) - int(1)
            };
            factor * b
        })
    })
}

fn factorial_table() -> &'static Memo<BigInt> {
    static TABLE: OnceLock<Memo<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        Memo::new(|known: &[BigInt]| match known.last() {
            None => BigInt::one(),
            Some(prev) => prev * BigInt::from(known.len()),
        })
    })
}

/// Bernoulli number `B_k` with the convention `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> Rational {
    bernoulli_table().get(k)
}

/// Bernoulli polynomial value `B_k(1/2) = (2^{1-k} - 1) B_k`.
pub fn bernoulli_at_half(k: usize) -> Rational {
    half_table().get(k)
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    factorial_table().get(n)
}

/// `1/n!` as a rational.
pub fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial `C(1/2, k)` via the falling factorial.
pub fn binomial_half(k: usize) -> Rational {
    let half = rat(1, 2);
    let mut acc = int(1);
    for i in 0..k {
        acc = acc * (&half - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Best rational approximation `p/q` to `x` with `q <= max_den`, accepted
/// only when `|x - p/q| <= tol`. Uses continued-fraction convergents.
pub fn snap_rational(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as u128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x).abs() <= tol {
            return Some((h1 as u64, k1 as u64));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Absolute value helper for rationals.
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Decimal digits of pi used for high-precision evaluation.
const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651";
/// Decimal digits of sqrt(pi).
const SQRT_PI_DIGITS: &str = "1.77245385090551602729816748334114518279754945612238712821380778985291128459103218137495065673854466541622682362";

fn decimal_to_rational(s: &str) -> Rational {
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{whole}{frac}").parse().expect("decimal literal");
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    Rational::new(digits, scale)
}

/// Pi to about 110 significant digits as a rational.
pub fn pi_rational() -> &'static Rational {
    static PI: OnceLock<Rational> = OnceLock::new();
    PI.get_or_init(|| decimal_to_rational(PI_DIGITS))
}

/// sqrt(pi) to about 110 significant digits as a rational.
pub fn sqrt_pi_rational() -> &'static Rational {
    static SQ: OnceLock<Rational> = OnceLock::new();
    SQ.get_or_init(|| decimal_to_rational(SQRT_PI_DIGITS))
}

/// `sqrt(pi)` as `f64`.
pub fn sqrt_pi() -> f64 {
    std::f64::consts::PI.sqrt()
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

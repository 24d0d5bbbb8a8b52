use super::{int, pow, sqrt_pi_rational, to_f64, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Exact real number `sum_e q_e * pi^(e/2)`: a Laurent polynomial in
/// `sqrt(pi)` with rational coefficients.
///
/// Keys are the half-exponents `e`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct PiPoly {
    terms: BTreeMap<i32, Rational>,
}

impl PiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(int(1))
    }

    /// `q * pi^(half_exp/2)`.
    pub fn monomial(q: Rational, half_exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(half_exp, q);
        }
        Self { terms }
    }

    pub fn rational(q: Rational) -> Self {
        Self::monomial(q, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// `pi^(half_exp/2)`.
    pub fn pi_power(half_exp: i32) -> Self {
        Self::monomial(int(1), half_exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(half_exp, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, q)| (*e, q))
    }

    pub fn coefficient(&self, half_exp: i32) -> Rational {
        self.terms
            .get(&half_exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The value as a plain rational, if it carries no power of pi.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// `(q, e)` when the value is a single term `q * pi^(e/2)`.
    pub fn as_monomial(&self) -> Option<(Rational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, q)| (q.clone(), *e))
        } else {
            None
        }
    }

    /// High-precision rational approximation (about 100 digits).
    pub fn approx_rational(&self) -> Rational {
        let sq = sqrt_pi_rational();
        self.terms
            .iter()
            .map(|(e, q)| q * pow(sq, *e))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> f64 {
        match self.as_monomial() {
            Some((q, e)) if e % 2 == 0 => to_f64(&q) * std::f64::consts::PI.powi(e / 2),
            _ if self.is_zero() => 0.0,
            _ => to_f64(&self.approx_rational()),
        }
    }

    /// Sign of the value (-1, 0, 1).
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let v = self.approx_rational();
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// Multiplies by `pi^(half_exp/2)`.
    pub fn shift(&self, half_exp: i32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + half_exp, c.clone()))
                .collect(),
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse; only monomials are invertible.
    pub fn recip(&self) -> Option<Self> {
        let (q, e) = self.as_monomial()?;
        Some(Self::monomial(q.recip(), -e))
    }

    /// `self / other` when exactly representable: `other` a monomial, or
    /// `self` a rational multiple of `other`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if let Some(inv) = other.recip() {
            return Some(self * &inv);
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (e0, c0) = other.terms.iter().next()?;
        let ratio = self.coefficient(*e0) / c0;
        if &other.scale(&ratio) == self {
            Some(Self::rational(ratio))
        } else {
            None
        }
    }

    /// Exact square root of a monomial with a perfect-square rational
    /// coefficient and an even half-exponent.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (q, e) = self.as_monomial()?;
        if q.is_negative() || e % 2 != 0 {
            return None;
        }
        let n = q.numer().sqrt();
        let d = q.denom().sqrt();
        if &(&n * &n) != q.numer() || &(&d * &d) != q.denom() {
            return None;
        }
        Some(Self::monomial(Rational::new(n, d), e / 2))
    }

    /// True when the value is an integer (no pi part).
    pub fn as_integer(&self) -> Option<i64> {
        let q = self.as_rational()?;
        if q.is_integer() {
            num_traits::ToPrimitive::to_i64(&q.to_integer())
        } else {
            None
        }
    }

    fn insert_add(&mut self, e: i32, q: &Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl From<Rational> for PiPoly {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{q}")?,
                2 => write!(f, "({q})*pi")?,
                _ if e % 2 == 0 => write!(f, "({q})*pi^{}", e / 2)?,
                _ => write!(f, "({q})*pi^({e}/2)")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn add(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiPoly {
    type Output = PiPoly;
    fn add(mut self, rhs: PiPoly) -> PiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&PiPoly> for PiPoly {
    fn add_assign(&mut self, rhs: &PiPoly) {
        for (e, q) in &rhs.terms {
            self.insert_add(*e, q);
        }
    }
}

impl SubAssign<&PiPoly> for PiPoly {
    fn sub_assign(&mut self, rhs: &PiPoly) {
        for (e, q) in &rhs.terms {
            self.insert_add(*e, &-q);
        }
    }
}

impl<'a> Sub<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn sub(self, rhs: &PiPoly) -> PiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for PiPoly {
    type Output = PiPoly;
    fn sub(mut self, rhs: PiPoly) -> PiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        Self {
            terms: self.terms.into_iter().map(|(e, q)| (e, -q)).collect(),
        }
    }
}

impl Neg for &PiPoly {
    type Output = PiPoly;
    fn neg(self) -> PiPoly {
        -self.clone()
    }
}

impl<'a> Mul<&'a PiPoly> for &'a PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: &PiPoly) -> PiPoly {
        let mut out = PiPoly::zero();
        for (ea, qa) in &self.terms {
            for (eb, qb) in &rhs.terms {
                out.insert_add(ea + eb, &(qa * qb));
            }
        }
        out
    }
}

impl Mul for PiPoly {
    type Output = PiPoly;
    fn mul(self, rhs: PiPoly) -> PiPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for PiPoly {
    fn sum<I: Iterator<Item = PiPoly>>(iter: I) -> Self {
        iter.fold(PiPoly::zero(), |a, b| a + b)
    }
}

impl PiPoly {
    /// True when the stored value is exactly one.
    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }
}

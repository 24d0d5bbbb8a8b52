use super::{PiPoly, Rational};
use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A geometric quantity or coefficient: exact (`PiPoly`) or floating.
///
/// Arithmetic between an exact and a float operand yields a float.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(PiPoly),
    Float(f64),
}

impl Scalar {
    pub fn zero(exact: bool) -> Self {
        if exact {
            Scalar::Exact(PiPoly::zero())
        } else {
            Scalar::Float(0.0)
        }
    }

    pub fn one(exact: bool) -> Self {
        if exact {
            Scalar::Exact(PiPoly::one())
        } else {
            Scalar::Float(1.0)
        }
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::Exact(PiPoly::rational(q))
    }

    pub fn integer(n: i64) -> Self {
        Scalar::Exact(PiPoly::integer(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(p) => p.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(p) => p.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&PiPoly> {
        match self {
            Scalar::Exact(p) => Some(p),
            Scalar::Float(_) => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Exact(p) => p.signum(),
            Scalar::Float(x) if *x > 0.0 => 1,
            Scalar::Float(x) if *x < 0.0 => -1,
            Scalar::Float(_) => 0,
        }
    }

    /// Converts to float mode unless `exact` is requested and possible.
    pub fn coerce(self, exact: bool) -> Self {
        match self {
            Scalar::Exact(p) if !exact => Scalar::Float(p.to_f64()),
            other => other,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + rhs.to_f64()),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => Scalar::Float(self.to_f64() - rhs.to_f64()),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * rhs.to_f64()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    /// Multiplies by an exact rational.
    pub fn scale(&self, q: &Rational) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.scale(q)),
            Scalar::Float(x) => Scalar::Float(x * super::to_f64(q)),
        }
    }

    /// Multiplies by `pi^(half_exp/2)`.
    pub fn shift(&self, half_exp: i32) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.shift(half_exp)),
            Scalar::Float(x) => Scalar::Float(x * std::f64::consts::PI.sqrt().powi(half_exp)),
        }
    }

    /// Integer power, with `0^0 = 1`.
    pub fn powi(&self, n: u32) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.powi(n)),
            Scalar::Float(x) => Scalar::Float(x.powi(n as i32)),
        }
    }

    /// Exact division where representable, float division otherwise.
    /// Returns `None` for division by zero or a non-representable exact quotient.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            return None;
        }
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.checked_div(b).map(Scalar::Exact),
            _ => Some(Scalar::Float(self.to_f64() / rhs.to_f64())),
        }
    }

    /// Square root, exact when the value is a perfect square monomial.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Exact(a) => a.sqrt().map(Scalar::Exact),
            Scalar::Float(x) if *x >= 0.0 => Some(Scalar::Float(x.sqrt())),
            Scalar::Float(_) => None,
        }
    }

    /// Parses `p`, `p/q`, either optionally followed by `pi`, or a decimal
    /// float. Integer and fraction forms are exact.
    pub fn parse(text: &str) -> Option<Scalar> {
        let s = text.trim();
        if s.is_empty() {
            return None;
        }
        let (body, has_pi) = match s.strip_suffix("pi") {
            Some(b) => (b.trim_end_matches('*'), true),
            None => (s, false),
        };
        let exact = if body.is_empty() || body == "-" || body == "+" {
            let sgn = if body == "-" { -1 } else { 1 };
            Some(super::int(sgn))
        } else if let Some((n, d)) = body.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        } else {
            body.parse::<BigInt>().ok().map(Rational::from_integer)
        };
        match exact {
            Some(q) => {
                let p = PiPoly::rational(q);
                Some(Scalar::Exact(if has_pi { p.shift(2) } else { p }))
            }
            None => {
                let x: f64 = body.parse().ok()?;
                if !x.is_finite() {
                    return None;
                }
                Some(Scalar::Float(if has_pi {
                    x * std::f64::consts::PI
                } else {
                    x
                }))
            }
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl From<PiPoly> for Scalar {
    fn from(p: PiPoly) -> Self {
        Scalar::Exact(p)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(p) => write!(f, "{p}"),
            Scalar::Float(x) => write!(f, "{}", format_float(*x)),
        }
    }
}

/// Fixed float formatting: 17 significant digits, lowercase `e`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize, Deserialize)]
struct MonoRepr {
    num: String,
    den: String,
    #[serde(default, skip_serializing_if = "is_zero_exp")]
    pi_half_exp: i32,
}

fn is_zero_exp(e: &i32) -> bool {
    *e == 0
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Float(f64),
    Mono(MonoRepr),
    Poly(Vec<MonoRepr>),
}

fn mono_repr(q: &Rational, e: i32) -> MonoRepr {
    MonoRepr {
        num: q.numer().to_string(),
        den: q.denom().to_string(),
        pi_half_exp: e,
    }
}

fn mono_value(m: &MonoRepr) -> Result<PiPoly, String> {
    let n: BigInt = m
        .num
        .parse()
        .map_err(|_| format!("bad numerator {:?}", m.num))?;
    let d: BigInt = m
        .den
        .parse()
        .map_err(|_| format!("bad denominator {:?}", m.den))?;
    if d == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(PiPoly::monomial(Rational::new(n, d), m.pi_half_exp))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Float(x) => ScalarRepr::Float(*x),
            Scalar::Exact(p) => match p.as_monomial() {
                Some((q, e)) => ScalarRepr::Mono(mono_repr(&q, e)),
                None if p.is_zero() => {
                    ScalarRepr::Mono(mono_repr(&Rational::from_integer(0.into()), 0))
                }
                None => ScalarRepr::Poly(p.terms().map(|(e, q)| mono_repr(q, e)).collect()),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ScalarRepr::deserialize(deserializer)? {
            ScalarRepr::Float(x) => Ok(Scalar::Float(x)),
            ScalarRepr::Mono(m) => mono_value(&m).map(Scalar::Exact).map_err(D::Error::custom),
            ScalarRepr::Poly(ms) => {
                let mut acc = PiPoly::zero();
                for m in &ms {
                    acc += &mono_value(m).map_err(D::Error::custom)?;
                }
                Ok(Scalar::Exact(acc))
            }
        }
    }
}

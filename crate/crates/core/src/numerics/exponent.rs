use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// How an exponent was given, which decides the evaluation route for `x^s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExponentKind {
    /// `s` is an integer: powers are exact rationals.
    Integer(i64),
    /// `s = num/den` in lowest terms with `den > 1`: powers go through exact
    /// `den`-th roots.
    Rational { num: i64, den: i64 },
    /// A real exponent carried by its exact decimal (or dyadic) literal:
    /// powers go through `exp(s ln x)`.
    Real { literal: String, digits: u32 },
}

/// The exponent `s` of `σ_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    value: BigRational,
    kind: ExponentKind,
}

impl Exponent {
    pub fn integer(k: i64) -> Self {
        Exponent {
            value: BigRational::from_integer(BigInt::from(k)),
            kind: ExponentKind::Integer(k),
        }
    }

    /// `num/den`, reduced; collapses to an integer exponent when possible.
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("exponent denominator is zero".into()));
        }
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        Self::from_rational(&r)
    }

    /// Wraps an exact rational as an integer or rational exponent.
    pub fn from_rational(r: &BigRational) -> Result<Self> {
        if r.is_integer() {
            let k = r
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Parse("exponent out of range".into()))?;
            return Ok(Self::integer(k));
        }
        let num = r.numer().to_i64();
        let den = r.denom().to_i64();
        match (num, den) {
            (Some(num), Some(den)) => Ok(Exponent {
                value: r.clone(),
                kind: ExponentKind::Rational { num, den },
            }),
            _ => Err(Error::Parse("exponent numerator/denominator out of range".into())),
        }
    }

    /// A real exponent whose value is the exact rational `r`. The literal is
    /// the terminating decimal expansion of `r` when one exists.
    pub fn real(r: &BigRational) -> Self {
        let (literal, digits) = match terminating_decimal(r) {
            Some((s, d)) => (s, d),
            None => (format!("{}/{}", r.numer(), r.denom()), 0),
        };
        Exponent {
            value: r.clone(),
            kind: ExponentKind::Real { literal, digits },
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn kind(&self) -> &ExponentKind {
        &self.kind
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self.kind {
            ExponentKind::Integer(k) => Some(k),
            _ => None,
        }
    }

    /// `(num, den)` for integer and rational kinds.
    pub fn as_ratio(&self) -> Option<(i64, i64)> {
        match self.kind {
            ExponentKind::Integer(k) => Some((k, 1)),
            ExponentKind::Rational { num, den } => Some((num, den)),
            ExponentKind::Real { .. } => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.kind, ExponentKind::Integer(_))
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    /// `-s`, keeping the kind.
    pub fn neg(&self) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(-1)))
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// `j·s` for an integer multiplier, keeping the evaluation route.
    pub fn times(&self, j: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(j)))
    }

    fn scale(&self, f: &BigRational) -> Self {
        let v = &self.value * f;
        match self.kind {
            ExponentKind::Real { .. } => {
                if v.is_integer() {
                    Self::from_rational(&v).unwrap_or_else(|_| Self::real(&v))
                } else {
                    Self::real(&v)
                }
            }
            _ => Self::from_rational(&v).unwrap_or_else(|_| Self::real(&v)),
        }
    }

    /// Smallest integer `>= s`.
    pub fn ceil(&self) -> BigInt {
        let v = &self.value;
        if v.is_integer() {
            v.to_integer()
        } else {
            v.floor().to_integer() + BigInt::one()
        }
    }

    /// `true` when `s > 1`.
    pub fn exceeds_one(&self) -> bool {
        self.value > BigRational::one()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

fn terminating_decimal(r: &BigRational) -> Option<(String, u32)> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = r * BigRational::from_integer(BigInt::from(10).pow(digits));
    let int = scaled.to_integer();
    if digits == 0 {
        return Some((int.to_string(), 0));
    }
    let neg = int.is_negative();
    let mut s = int.abs().to_string();
    while s.len() <= digits as usize {
        s.insert(0, '0');
    }
    s.insert(s.len() - digits as usize, '.');
    if neg {
        s.insert(0, '-');
    }
    Some((s, digits))
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `3`, `-1`, `1/2`, `-3/4` and decimals such as `0.75`; decimals
    /// are read as exact rationals over a power of ten.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("cannot parse exponent {text:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return Self::rational(n, d);
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.chars().all(|c| c.is_ascii_digit())
                || !frac.chars().all(|c| c.is_ascii_digit())
                || (int_digits.is_empty() && frac.is_empty())
            {
                return Err(bad());
            }
            let joined = format!("{int_digits}{frac}");
            let mut num: BigInt = if joined.is_empty() {
                BigInt::zero()
            } else {
                joined.parse().map_err(|_| bad())?
            };
            if neg {
                num = -num;
            }
            let den = BigInt::from(10).pow(frac.len() as u32);
            return Self::from_rational(&BigRational::new(num, den));
        }
        let k: i64 = t.parse().map_err(|_| bad())?;
        Ok(Self::integer(k))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExponentKind::Integer(k) => write!(f, "{k}"),
            ExponentKind::Rational { num, den } => write!(f, "{num}/{den}"),
            ExponentKind::Real { literal, .. } => write!(f, "{literal}"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.kind {
            ExponentKind::Real { .. } => {
                s.serialize_str(&format!("real:{}/{}", self.value.numer(), self.value.denom()))
            }
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if let Some(rest) = text.strip_prefix("real:") {
            let (n, den) = rest
                .split_once('/')
                .ok_or_else(|| serde::de::Error::custom("bad real exponent"))?;
            let n: BigInt = n.parse().map_err(serde::de::Error::custom)?;
            let den: BigInt = den.parse().map_err(serde::de::Error::custom)?;
            return Ok(Exponent::real(&BigRational::new(n, den)));
        }
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("3".parse::<Exponent>().unwrap().kind(), &ExponentKind::Integer(3));
        assert_eq!(
            "2/4".parse::<Exponent>().unwrap().kind(),
            &ExponentKind::Rational { num: 1, den: 2 }
        );
        assert_eq!("4/2".parse::<Exponent>().unwrap().kind(), &ExponentKind::Integer(2));
        assert_eq!(
            "0.75".parse::<Exponent>().unwrap().kind(),
            &ExponentKind::Rational { num: 3, den: 4 }
        );
        assert_eq!(
            "-0.5".parse::<Exponent>().unwrap().kind(),
            &ExponentKind::Rational { num: -1, den: 2 }
        );
        assert_eq!(
            "3/-6".parse::<Exponent>().unwrap().kind(),
            &ExponentKind::Rational { num: -1, den: 2 }
        );
        assert_eq!("2.0".parse::<Exponent>().unwrap().kind(), &ExponentKind::Integer(2));
        assert!("abc".parse::<Exponent>().is_err());
        assert!("1/0".parse::<Exponent>().is_err());
        assert!(".".parse::<Exponent>().is_err());
    }

    #[test]
    fn real_literal_is_exact_decimal() {
        let r = BigRational::new(BigInt::from(3), BigInt::from(8));
        let e = Exponent::real(&r);
        assert_eq!(e.to_string(), "0.375");
        assert_eq!(e.ceil(), BigInt::from(1));
        let back: Exponent = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn ceil_and_multiples() {
        let e: Exponent = "-3/2".parse().unwrap();
        assert_eq!(e.ceil(), BigInt::from(-1));
        assert_eq!(e.times(2).as_integer(), Some(-3));
        assert_eq!(e.abs().to_string(), "3/2");
    }
}

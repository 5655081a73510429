use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ball::Ball;
use super::dyadic::format_rational;
use super::exponent::{Exponent, ExponentKind};
use crate::error::{Error, Result};

/// Largest root degree handled by exact roots; beyond it rational
/// exponents use the `exp(s ln x)` route.
pub const MAX_ROOT_DEGREE: i64 = 64;

/// An exact rational or a certified ball.
#[derive(Clone, PartialEq, Eq)]
pub enum ScalarValue {
    Exact(BigRational),
    Ball(Ball),
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    /// Overlapping balls at the given precision.
    Undecided(u32),
}

impl Comparison {
    pub fn from_ordering(o: Ordering) -> Comparison {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }

    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Comparison::Less => Some(Ordering::Less),
            Comparison::Equal => Some(Ordering::Equal),
            Comparison::Greater => Some(Ordering::Greater),
            Comparison::Undecided(_) => None,
        }
    }

    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            c => c,
        }
    }
}

impl ScalarValue {
    pub fn from_int<T: Into<BigInt>>(v: T) -> ScalarValue {
        ScalarValue::Exact(BigRational::from_integer(v.into()))
    }

    pub fn from_biguint(v: &BigUint) -> ScalarValue {
        ScalarValue::from_int(BigInt::from(v.clone()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ScalarValue::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            ScalarValue::Exact(r) => Some(r),
            ScalarValue::Ball(_) => None,
        }
    }

    /// Ball view at `prec` bits; exact values become tight balls.
    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            ScalarValue::Exact(r) => Ball::from_rational(r, prec),
            ScalarValue::Ball(b) => b.clone(),
        }
    }

    /// Working precision, or `None` for exact values.
    pub fn precision(&self) -> Option<u32> {
        match self {
            ScalarValue::Exact(_) => None,
            ScalarValue::Ball(b) => Some(b.prec()),
        }
    }

    /// Rational bounds `(lo, hi)`.
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            ScalarValue::Exact(r) => (r.clone(), r.clone()),
            ScalarValue::Ball(b) => b.bounds_rational(),
        }
    }

    pub fn add(&self, o: &ScalarValue) -> ScalarValue {
        match (self, o) {
            (ScalarValue::Exact(x), ScalarValue::Exact(y)) => ScalarValue::Exact(x + y),
            _ => {
                let p = self.prec_with(o);
                ScalarValue::Ball(self.to_ball(p).add(&o.to_ball(p)))
            }
        }
    }

    pub fn mul(&self, o: &ScalarValue) -> ScalarValue {
        match (self, o) {
            (ScalarValue::Exact(x), ScalarValue::Exact(y)) => ScalarValue::Exact(x * y),
            _ => {
                let p = self.prec_with(o);
                ScalarValue::Ball(self.to_ball(p).mul(&o.to_ball(p)))
            }
        }
    }

    pub fn div(&self, o: &ScalarValue) -> Result<ScalarValue> {
        match (self, o) {
            (ScalarValue::Exact(x), ScalarValue::Exact(y)) => {
                if y.is_zero() {
                    Err(Error::Domain("division by zero".into()))
                } else {
                    Ok(ScalarValue::Exact(x / y))
                }
            }
            _ => {
                let p = self.prec_with(o);
                Ok(ScalarValue::Ball(self.to_ball(p).div(&o.to_ball(p))?))
            }
        }
    }

    fn prec_with(&self, o: &ScalarValue) -> u32 {
        self.precision().into_iter().chain(o.precision()).max().unwrap_or(128)
    }

    /// Decimal rendering: exact integers in full, everything else to
    /// `digits` significant digits (balls print their midpoint).
    pub fn display(&self, digits: usize) -> String {
        match self {
            ScalarValue::Exact(r) if r.is_integer() => r.numer().to_string(),
            ScalarValue::Exact(r) => format_rational(r, digits),
            ScalarValue::Ball(b) => format_rational(&b.mid().to_rational(), digits),
        }
    }
}

/// Exact values serialize as `{"exact": "p/q"}`, balls as their rational
/// endpoints with a decimal midpoint for reading.
impl Serialize for ScalarValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            ScalarValue::Exact(r) => {
                let mut m = ser.serialize_map(Some(1))?;
                m.serialize_entry("exact", &crate::codec::format_ratio(r))?;
                m.end()
            }
            ScalarValue::Ball(b) => {
                let (lo, hi) = b.bounds_rational();
                let mut m = ser.serialize_map(Some(4))?;
                m.serialize_entry("approx", &self.display(30))?;
                m.serialize_entry("lo", &crate::codec::format_ratio(&lo))?;
                m.serialize_entry("hi", &crate::codec::format_ratio(&hi))?;
                m.serialize_entry("prec", &b.prec())?;
                m.end()
            }
        }
    }
}

impl fmt::Debug for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Exact(r) => write!(f, "Exact({r})"),
            ScalarValue::Ball(b) => write!(f, "{b:?}"),
        }
    }
}

/// Certified comparison. `Equal` only arises between exact values.
pub fn compare(x: &ScalarValue, y: &ScalarValue) -> Comparison {
    match (x, y) {
        (ScalarValue::Exact(a), ScalarValue::Exact(b)) => Comparison::from_ordering(a.cmp(b)),
        (ScalarValue::Ball(a), ScalarValue::Exact(r)) => cmp_ball_rational(a, r),
        (ScalarValue::Exact(r), ScalarValue::Ball(b)) => cmp_ball_rational(b, r).reverse(),
        (ScalarValue::Ball(a), ScalarValue::Ball(b)) => match a.try_cmp(b) {
            Some(o) => Comparison::from_ordering(o),
            None => Comparison::Undecided(a.prec().max(b.prec())),
        },
    }
}

fn cmp_ball_rational(a: &Ball, r: &BigRational) -> Comparison {
    if a.hi().cmp_rational(r) == Ordering::Less {
        Comparison::Less
    } else if a.lo().cmp_rational(r) == Ordering::Greater {
        Comparison::Greater
    } else {
        Comparison::Undecided(a.prec())
    }
}

/// Exact `v`-th root of a nonnegative integer, if it exists.
fn exact_root(x: &BigInt, v: u32) -> Option<BigInt> {
    let m = x.magnitude();
    let r = m.nth_root(v);
    (r.pow(v) == *m).then(|| BigInt::from(r))
}

fn rational_powi(x: &BigRational, k: i64) -> BigRational {
    let e = k.unsigned_abs() as u32;
    let p = BigRational::new(x.numer().pow(e), x.denom().pow(e));
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

/// `x^s` for a nonnegative rational `x`.
pub fn pow_scalar(x: &BigRational, s: &Exponent, prec: u32) -> Result<ScalarValue> {
    if x.is_negative() {
        return Err(Error::Domain(format!("negative base {x}")));
    }
    if x.is_zero() {
        return if s.is_positive() {
            Ok(ScalarValue::from_int(0))
        } else {
            Err(Error::Domain(format!("0^{s} is undefined")))
        };
    }
    if s.is_zero() || x.is_one() {
        return Ok(ScalarValue::from_int(1));
    }
    match s.kind() {
        ExponentKind::Integer(k) => Ok(ScalarValue::Exact(rational_powi(x, *k))),
        ExponentKind::Rational { num, den } if *den <= MAX_ROOT_DEGREE => {
            let v = *den as u32;
            if let (Some(rn), Some(rd)) = (exact_root(x.numer(), v), exact_root(x.denom(), v)) {
                return Ok(ScalarValue::Exact(rational_powi(&BigRational::new(rn, rd), *num)));
            }
            let ball = Ball::from_rational(x, prec + 8);
            Ok(ScalarValue::Ball(ball.pow_ratio(*num, v)?.with_prec(prec)))
        }
        _ => {
            let ball = Ball::from_rational(x, prec + 8);
            Ok(ScalarValue::Ball(ball.pow_real(s.value())?.with_prec(prec)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dyadic::Dyadic;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_and_perfect_powers_are_exact() {
        let e3 = Exponent::integer(3);
        assert_eq!(pow_scalar(&q(2, 1), &e3, 128).unwrap(), ScalarValue::from_int(8));
        let half: Exponent = "1/2".parse().unwrap();
        assert_eq!(pow_scalar(&q(4, 1), &half, 128).unwrap(), ScalarValue::from_int(2));
        assert_eq!(
            pow_scalar(&q(4, 9), &"-3/2".parse().unwrap(), 128).unwrap(),
            ScalarValue::Exact(q(27, 8))
        );
        assert!(pow_scalar(&q(0, 1), &Exponent::integer(0), 64).is_err());
        assert!(pow_scalar(&q(0, 1), &"-1/2".parse().unwrap(), 64).is_err());
    }

    #[test]
    fn sqrt2_ball_is_tight() {
        let half: Exponent = "1/2".parse().unwrap();
        let v = pow_scalar(&q(2, 1), &half, 128).unwrap();
        let ScalarValue::Ball(b) = v else { panic!("expected a ball") };
        assert!(b.width() <= Dyadic::new(BigInt::one(), -120));
        // 1.41421356237 < sqrt 2 < 1.41421356238 since the squares bracket 2.
        assert!(!b.contains(&q(141421356237, 100000000000)));
        assert_eq!(cmp_ball_rational(&b, &q(141421356237, 100000000000)), Comparison::Greater);
        assert_eq!(cmp_ball_rational(&b, &q(141421356238, 100000000000)), Comparison::Less);
    }

    #[test]
    fn compare_examples() {
        let a = ScalarValue::Exact(q(3, 7));
        let b = ScalarValue::Exact(q(1, 2));
        assert_eq!(compare(&a, &b), Comparison::Less);
        assert_eq!(compare(&b, &a), Comparison::Greater);
        let mid = Dyadic::from_rational(&q(1414, 1000), 128, crate::numerics::dyadic::Round::Down);
        let rad = Dyadic::from_rational(&q(1, 1_000_000_000), 64, crate::numerics::dyadic::Round::Up);
        let rad = rad.mul(&rad).mul(&rad).mul(&Dyadic::from_int(1000));
        let x = ScalarValue::Ball(Ball::from_mid_rad(&mid, &rad, 128));
        assert!(matches!(compare(&x, &x.clone()), Comparison::Undecided(_)));
        let y = ScalarValue::Ball(Ball::from_mid_rad(
            &Dyadic::from_rational(&q(19, 10), 128, crate::numerics::dyadic::Round::Down),
            &Dyadic::from_rational(&q(5, 100), 128, crate::numerics::dyadic::Round::Up),
            128,
        ));
        assert_eq!(compare(&ScalarValue::from_int(2), &y), Comparison::Greater);
    }

    #[test]
    fn real_route_agrees_with_root_route() {
        let r = q(7, 3);
        let rational: Exponent = "2/5".parse().unwrap();
        let real = Exponent::real(&q(2, 5));
        let a = pow_scalar(&r, &rational, 128).unwrap().to_ball(128);
        let b = pow_scalar(&r, &real, 128).unwrap().to_ball(128);
        assert!(a.overlaps(&b));
        assert!(b.rad() < Dyadic::new(BigInt::one(), -100));
    }
}

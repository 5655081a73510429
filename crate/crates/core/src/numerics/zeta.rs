//! Rigorous enclosures of `ζ(s)` for real `s > 1`.
//!
//! `S_N + (N+1)^(1-s)/(s-1) <= ζ(s) <= S_N + N^(1-s)/(s-1)` where `S_N` is
//! the partial sum, every term rounded outward.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::ball::Ball;
use super::dyadic::{format_rational, Dyadic, Round};
use super::exponent::{Exponent, ExponentKind};
use super::scalar::{pow_scalar, ScalarValue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ZetaEnclosure {
    pub s: Exponent,
    #[serde(serialize_with = "crate::codec::rational::serialize")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::codec::rational::serialize")]
    pub hi: BigRational,
    pub terms_used: u64,
}

impl ZetaEnclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo <= *r && *r <= self.hi
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        Ball::from_bounds(
            Dyadic::from_rational(&self.lo, prec, Round::Down),
            Dyadic::from_rational(&self.hi, prec, Round::Up),
            prec,
        )
    }

    pub fn to_scalar(&self, prec: u32) -> ScalarValue {
        ScalarValue::Ball(self.to_ball(prec))
    }
}

/// Same evaluation route as `s`, new value.
fn exponent_like(s: &Exponent, v: &BigRational) -> Exponent {
    match s.kind() {
        ExponentKind::Real { .. } => Exponent::real(v),
        _ => Exponent::from_rational(v).unwrap_or_else(|_| Exponent::real(v)),
    }
}

/// Approximate `log2 r` for a positive rational.
fn log2_approx(r: &BigRational) -> f64 {
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(BigInt::one() << shift as u64)
    } else {
        r * BigRational::from_integer(BigInt::one() << (-shift) as u64)
    };
    scaled.to_f64().unwrap_or(1.0).log2() + shift as f64
}

fn bounds_of(v: &ScalarValue, prec: u32) -> (Dyadic, Dyadic) {
    match v {
        ScalarValue::Exact(r) => (
            Dyadic::from_rational(r, prec, Round::Down),
            Dyadic::from_rational(r, prec, Round::Up),
        ),
        ScalarValue::Ball(b) => (b.lo().clone(), b.hi().clone()),
    }
}

fn enclosure_at(s: &Exponent, n_terms: u64, prec: u32) -> Result<(Dyadic, Dyadic)> {
    let neg = s.neg();
    let (mut lo, mut hi) = (Dyadic::zero(), Dyadic::zero());
    for n in 1..=n_terms {
        let t = pow_scalar(&BigRational::from_integer(BigInt::from(n)), &neg, prec)?;
        let (l, h) = bounds_of(&t, prec);
        lo = lo.add(&l);
        hi = hi.add(&h);
    }
    let one_minus = exponent_like(s, &(BigRational::one() - s.value()));
    let inv = (s.value() - BigRational::one()).recip();
    let inv_b = Ball::from_rational(&inv, prec);
    let tail = |m: u64| -> Result<Ball> {
        let p = pow_scalar(&BigRational::from_integer(BigInt::from(m)), &one_minus, prec)?;
        Ok(p.to_ball(prec).mul(&inv_b))
    };
    let tail_lo = tail(n_terms + 1)?;
    let tail_hi = tail(n_terms)?;
    Ok((lo.add(tail_lo.lo()), hi.add(tail_hi.hi())))
}

/// Enclosure of `ζ(s)` with `hi - lo <= target`, using at most `cap` terms.
pub fn zeta_enclosure(s: &Exponent, target: &BigRational, cap: u64) -> Result<ZetaEnclosure> {
    if !s.exceeds_one() {
        return Err(Error::Domain(format!("zeta enclosure needs s > 1, got {s}")));
    }
    if !target.is_positive() {
        return Err(Error::Domain("target radius must be positive".into()));
    }
    let sf = s.to_f64();
    let lt = -log2_approx(target);
    // The gap between the two tails is about N^-s.
    let n_est = (lt.max(0.0) / sf).exp2().ceil() + 1.0;
    let achievable = |n: f64| format!("{:.3e}", n.powf(-sf));
    if n_est > cap as f64 {
        return Err(Error::PrecisionUnreachable {
            reason: format!("zeta({s}) to width {} needs about {n_est:.3e} terms", format_rational(target, 4)),
            achievable: achievable(cap as f64),
        });
    }
    let mut n_terms = n_est as u64;
    let cap_value = s.value() / (s.value() - BigRational::one());
    loop {
        let prec = (2.0 * lt.max(0.0) + (n_terms as f64).log2() + 32.0).max(128.0) as u32;
        let (lo, hi) = enclosure_at(s, n_terms, prec)?;
        let lo = lo.to_rational();
        let hi = hi.to_rational().min(cap_value.clone());
        if &hi - &lo <= *target {
            return Ok(ZetaEnclosure {
                s: s.clone(),
                lo,
                hi,
                terms_used: n_terms,
            });
        }
        if n_terms >= cap {
            return Err(Error::PrecisionUnreachable {
                reason: format!("zeta({s}) did not reach the requested width"),
                achievable: achievable(n_terms as f64),
            });
        }
        n_terms = (n_terms * 2).min(cap);
    }
}

/// Result of a threshold solve: `ζ(s) < x` is certified by `enclosure`.
#[derive(Debug, Clone, Serialize)]
pub struct ZetaThreshold {
    pub s: Exponent,
    pub enclosure: ZetaEnclosure,
}

/// Decides `ζ(s) < x`: `Some(enclosure)` when certified below, `None` when
/// certified at or above, error if still straddling after `rounds` refinements.
fn certify_below(
    s: &Exponent,
    x: &BigRational,
    rounds: u32,
    cap: u64,
) -> Result<Option<ZetaEnclosure>> {
    let gap = x - BigRational::one();
    let mut target = &gap / BigRational::from_integer(BigInt::from(16));
    for _ in 0..rounds {
        let enc = zeta_enclosure(s, &target, cap)?;
        if enc.hi < *x {
            return Ok(Some(enc));
        }
        if enc.lo >= *x {
            return Ok(None);
        }
        target /= BigRational::from_integer(BigInt::from(256));
    }
    Err(Error::PrecisionUnreachable {
        reason: format!("zeta({s}) straddles {x}"),
        achievable: format_rational(&target, 3),
    })
}

/// Smallest integer `s >= 2` with `ζ(s) < x`, or with `integer_only = false`
/// a real `s` within `2^-20` of the true threshold, rounded upward so that
/// `ζ(s) < x` still holds.
pub fn solve_zeta_threshold(x: &BigRational, integer_only: bool, cap: u64) -> Result<ZetaThreshold> {
    if *x <= BigRational::one() {
        return Err(Error::Domain(format!("threshold {x} must exceed 1")));
    }
    let mut k: i64 = 2;
    let (s_int, enc_int) = loop {
        let s = Exponent::integer(k);
        if let Some(enc) = certify_below(&s, x, 6, cap)? {
            break (s, enc);
        }
        k += 1;
    };
    if integer_only {
        return Ok(ZetaThreshold {
            s: s_int,
            enclosure: enc_int,
        });
    }
    let mut lo = BigRational::from_integer(BigInt::from(k - 1));
    let mut hi = BigRational::from_integer(BigInt::from(k));
    let mut best = enc_int;
    let width = BigRational::new(BigInt::one(), BigInt::one() << 20u32);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let s = Exponent::real(&mid);
        match certify_below(&s, x, 3, cap) {
            Ok(Some(enc)) => {
                hi = mid;
                best = enc;
            }
            Ok(None) | Err(Error::PrecisionUnreachable { .. }) => lo = mid,
            Err(e) => return Err(e),
        }
    }
    Ok(ZetaThreshold {
        s: if hi.is_integer() { Exponent::integer(k) } else { Exponent::real(&hi) },
        enclosure: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pi2_over_6() -> BigRational {
        // pi to 40 places from the Machin formula, squared, over 6.
        let pi: BigRational = BigRational::new(
            "31415926535897932384626433832795028841971".parse().unwrap(),
            BigInt::from(10).pow(40),
        );
        &pi * &pi / BigRational::from_integer(BigInt::from(6))
    }

    #[test]
    fn zeta2_contains_closed_form() {
        let e = zeta_enclosure(&Exponent::integer(2), &q(1, 1_000_000_000), 10_000_000).unwrap();
        assert!(e.width() <= q(1, 1_000_000_000));
        let truth = pi2_over_6();
        let slack = q(1, 1_000_000_000_000_000_000);
        assert!(e.lo <= &truth + &slack && &truth - &slack <= e.hi);
        assert!(e.hi <= q(2, 1));
    }

    #[test]
    fn s_at_most_one_rejected() {
        assert!(zeta_enclosure(&Exponent::integer(1), &q(1, 10), 100).is_err());
        assert!(zeta_enclosure(&"1/2".parse().unwrap(), &q(1, 10), 100).is_err());
        let err = zeta_enclosure(&"10001/10000".parse().unwrap(), &q(1, 1_000_000), 1000);
        assert!(matches!(err, Err(Error::PrecisionUnreachable { .. })));
    }

    #[test]
    fn integer_thresholds() {
        assert_eq!(solve_zeta_threshold(&q(3, 2), true, 1 << 24).unwrap().s, Exponent::integer(3));
        assert_eq!(
            solve_zeta_threshold(&q(49997, 49996), true, 1 << 24).unwrap().s,
            Exponent::integer(16)
        );
    }

    #[test]
    fn real_threshold_is_certified_and_below_integer() {
        let t = solve_zeta_threshold(&q(3, 2), false, 1 << 24).unwrap();
        assert!(t.enclosure.hi < q(3, 2));
        let s = t.s.value().clone();
        assert!(s > q(2, 1) && s < q(3, 1));
    }
}

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::{format_rational, Dyadic, Round};
use super::elementary::{exp_bounds, ln_bounds, root_bounds};
use crate::error::{Error, Result};

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// Stored by its endpoints, which are dyadic and rounded outward to `prec`
/// mantissa bits after every operation; `mid` and `rad` are derived exactly.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Ball {
    /// Ball from endpoint bounds, rounded outward.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Ball {
        assert!(lo <= hi, "inverted ball");
        Ball {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn from_dyadic(x: &Dyadic, prec: u32) -> Ball {
        Ball::from_bounds(x.clone(), x.clone(), prec)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Ball {
        Ball::from_dyadic(&Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Ball {
        Ball {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    /// Ball given as midpoint and radius.
    pub fn from_mid_rad(mid: &Dyadic, rad: &Dyadic, prec: u32) -> Ball {
        assert!(!rad.is_negative(), "negative radius");
        Ball::from_bounds(mid.sub(rad), mid.add(rad), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn rad(&self) -> Dyadic {
        self.hi.sub(&self.lo).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains_ball(&self, o: &Ball) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn overlaps(&self, o: &Ball) -> bool {
        !(self.hi < o.lo || o.hi < self.lo)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        Ball::from_bounds(self.lo.clone(), self.hi.clone(), prec)
    }

    fn out_prec(&self, o: &Ball) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        Ball::from_bounds(self.lo.add(&o.lo), self.hi.add(&o.hi), self.out_prec(o))
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let prec = self.out_prec(o);
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Ball::from_bounds(self.lo.mul(&o.lo), self.hi.mul(&o.hi), prec);
        }
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = c.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Ball::from_bounds(lo, hi, prec)
    }

    /// `1/x`; fails when the ball touches zero.
    pub fn recip(&self) -> Result<Ball> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return Err(Error::Domain("reciprocal of a ball containing zero".into()));
        }
        let one = Dyadic::one();
        Ok(Ball {
            lo: Dyadic::div(&one, &self.hi, self.prec, Round::Down),
            hi: Dyadic::div(&one, &self.lo, self.prec, Round::Up),
            prec: self.prec,
        })
    }

    pub fn div(&self, o: &Ball) -> Result<Ball> {
        let prec = self.out_prec(o);
        if o.lo.is_positive() && !self.lo.is_negative() {
            return Ok(Ball {
                lo: Dyadic::div(&self.lo, &o.hi, prec, Round::Down),
                hi: Dyadic::div(&self.hi, &o.lo, prec, Round::Up),
                prec,
            });
        }
        Ok(self.mul(&o.with_prec(prec).recip()?))
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, k: i64) -> Result<Ball> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let mut base = self.clone();
        let mut acc = Ball::from_int(1, self.prec);
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `x^(1/v)` for `x >= 0`.
    pub fn root(&self, v: u32) -> Result<Ball> {
        if self.lo.is_negative() {
            return Err(Error::Domain("root of a ball with negative part".into()));
        }
        let lo = root_bounds(&self.lo, v, self.prec).0;
        let hi = root_bounds(&self.hi, v, self.prec).1;
        Ok(Ball::from_bounds(lo, hi, self.prec))
    }

    /// `x^(num/den)` for a positive ball.
    pub fn pow_ratio(&self, num: i64, den: u32) -> Result<Ball> {
        let guard = self.with_prec(self.prec + 16 + 2 * (64 - num.unsigned_abs().leading_zeros()));
        guard.root(den)?.powi(num).map(|b| b.with_prec(self.prec))
    }

    pub fn ln(&self) -> Result<Ball> {
        if !self.lo.is_positive() {
            return Err(Error::Domain("logarithm of a nonpositive ball".into()));
        }
        let lo = ln_bounds(&self.lo, self.prec).0;
        let hi = ln_bounds(&self.hi, self.prec).1;
        Ok(Ball::from_bounds(lo, hi, self.prec))
    }

    pub fn exp(&self) -> Ball {
        let lo = exp_bounds(&self.lo, self.prec).0;
        let hi = exp_bounds(&self.hi, self.prec).1;
        Ball::from_bounds(lo, hi, self.prec)
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, r: &BigRational) -> Ball {
        self.mul(&Ball::from_rational(r, self.prec))
    }

    /// `x^s = exp(s · ln x)` for a positive ball and a rational `s`.
    pub fn pow_real(&self, s: &BigRational) -> Result<Ball> {
        if s.is_zero() {
            return Ok(Ball::from_int(1, self.prec));
        }
        // Guard bits absorb the magnification of the logarithm's error.
        let lnx = self.with_prec(self.prec + 32).ln()?;
        let mag = lnx.hi.abs().max(lnx.lo.abs());
        let extra = if mag.is_zero() { 0 } else { mag.log2_floor().max(0) as u32 };
        let guard = self.prec + 32 + extra + s.numer().bits() as u32;
        let lnx = self.with_prec(guard).ln()?;
        let y = lnx.mul(&Ball::from_rational(s, guard));
        Ok(y.exp().with_prec(self.prec))
    }

    /// Certified ordering, or `None` when the balls overlap.
    pub fn try_cmp(&self, o: &Ball) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Rational endpoints.
    pub fn bounds_rational(&self) -> (BigRational, BigRational) {
        (self.lo.to_rational(), self.hi.to_rational())
    }

    /// Human-readable `mid ± rad`.
    pub fn display(&self, digits: usize) -> String {
        let mid = format_rational(&self.mid().to_rational(), digits);
        let rad = self.rad();
        if rad.is_zero() {
            mid
        } else {
            format!("{mid}+-{}", format_rational(&rad.to_rational(), 2))
        }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ball[{}]", self.display(25))
    }
}

/// Convenience: the ball `[1, 1]`.
pub fn ball_one(prec: u32) -> Ball {
    Ball::from_dyadic(&Dyadic::one(), prec)
}

/// Convenience: `p/q` as a rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

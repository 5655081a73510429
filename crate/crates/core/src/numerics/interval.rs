//! Outward-rounded `f64` intervals: the fast tier of every comparison.
//!
//! Each operation rounds to nearest and then steps one ulp outward, which
//! brackets the exact result. Any value that cannot be bracketed this way
//! (overflow, inputs beyond 2^53) makes the caller fall back to balls.

use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

impl Interval {
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Exact point for integers up to 2^53.
    #[inline]
    pub fn from_u64(v: u64) -> Option<Interval> {
        if v > (1u64 << 53) {
            return None;
        }
        let x = v as f64;
        Some(Interval { lo: x, hi: x })
    }

    #[inline]
    pub fn add(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }

    /// Product of two nonnegative intervals.
    #[inline]
    pub fn mul(self, o: Interval) -> Interval {
        debug_assert!(self.lo >= 0.0 && o.lo >= 0.0);
        Interval {
            lo: down(self.lo * o.lo),
            hi: up(self.hi * o.hi),
        }
    }

    /// Reciprocal of a positive interval.
    #[inline]
    pub fn recip(self) -> Interval {
        debug_assert!(self.lo > 0.0);
        Interval {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        }
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Certified order, `None` on overlap.
    #[inline]
    pub fn try_cmp(self, o: Interval) -> Option<Ordering> {
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

/// `[lo^k rounded down, hi^k rounded up]` for a nonnegative interval.
fn powu(x: Interval, k: u32) -> Interval {
    let mut acc = Interval::ONE;
    for _ in 0..k {
        acc = acc.mul(x);
    }
    acc
}

/// Enclosure of `p^(u/v)` for an integer `p >= 1`, `v >= 1`.
///
/// The candidate comes from `powf`, widened by a few relative ulps, and is
/// accepted only after checking `lo^v <= p^|u| <= hi^v` with directed
/// products. Returns `None` when that check cannot be carried out in `f64`.
pub fn pow_ratio_u64(p: u64, u: i64, v: u32) -> Option<Interval> {
    let base = Interval::from_u64(p)?;
    if u == 0 || p == 1 {
        return Some(Interval::ONE);
    }
    let au = u.unsigned_abs();
    if au > 4096 || v > 64 {
        return None;
    }
    let log2p = 64 - p.leading_zeros() as u64;
    if au * log2p > 1000 {
        return None;
    }
    let target = powu(base, au as u32);
    let pos = if v == 1 {
        target
    } else {
        let c = (p as f64).powf(au as f64 / v as f64);
        let slack = (v as f64 + 4.0) * f64::EPSILON;
        let lo = down(c * (1.0 - slack));
        let hi = up(c * (1.0 + slack));
        let lo_v = powu(Interval { lo, hi: lo }, v);
        let hi_v = powu(Interval { lo: hi, hi }, v);
        if !(lo_v.hi <= target.lo && hi_v.lo >= target.hi) {
            return None;
        }
        Interval { lo, hi }
    };
    if !pos.is_finite() {
        return None;
    }
    Some(if u < 0 { pos.recip() } else { pos })
}

/// `1 + y + ... + y^alpha` for a nonnegative interval `y`.
#[inline]
pub fn geometric(y: Interval, alpha: u32) -> Interval {
    let mut acc = Interval::ONE;
    for _ in 0..alpha {
        acc = acc.mul(y).add(Interval::ONE);
    }
    acc
}

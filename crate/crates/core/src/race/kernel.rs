//! Certified sign of `σ_s(L) - σ_s(R)` for factored `L`, `R`.
//!
//! Integer exponents are compared exactly (in `u128` when it fits). Other
//! exponents try outward-rounded `f64` intervals first and escalate through
//! the ball precision ladder only when those overlap.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numerics::interval::{geometric, pow_ratio_u64, Interval};
use crate::numerics::{compare, Exponent, ExponentKind, ScalarValue};
use crate::sigma::{primes_up_to, sigma_nonneg_int, sigma_s, Factorization};

/// Primes below this get their `p^s` enclosure precomputed.
const CACHE_LIMIT: u64 = 1 << 16;

/// Precision reported for decisions made by the `f64` tier.
pub const F64_BITS: u32 = 53;

#[derive(Debug, Clone)]
enum Mode {
    NonNeg(u32),
    Neg(u32),
    Fractional { u: i64, v: u32 },
    Slow,
}

/// A certified ordering and the precision it needed (0 for exact).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub ord: Ordering,
    pub bits: u32,
}

#[derive(Debug, Clone)]
pub struct Kernel {
    s: Exponent,
    mode: Mode,
    ladder: Vec<u32>,
    /// `p^s` for primes `p < CACHE_LIMIT`, indexed by `p`.
    cache: Vec<Option<Interval>>,
}

impl Kernel {
    pub fn new(s: &Exponent, ladder: Vec<u32>) -> Kernel {
        let mode = match s.kind() {
            ExponentKind::Integer(k) if *k >= 0 && *k <= u32::MAX as i64 => Mode::NonNeg(*k as u32),
            ExponentKind::Integer(k) if *k < 0 && *k >= -(u32::MAX as i64) => Mode::Neg(k.unsigned_abs() as u32),
            _ => {
                let v = s.value();
                match (v.numer().to_i64(), v.denom().to_u32()) {
                    (Some(u), Some(d)) if d <= 64 && v.denom() > &1.into() => {
                        Mode::Fractional { u, v: d }
                    }
                    _ => Mode::Slow,
                }
            }
        };
        let mut cache = Vec::new();
        if let Mode::Fractional { u, v } = mode {
            cache = vec![None; CACHE_LIMIT as usize];
            for p in primes_up_to(CACHE_LIMIT - 1) {
                cache[p as usize] = pow_ratio_u64(p, u, v);
            }
        }
        Kernel {
            s: s.clone(),
            mode,
            ladder,
            cache,
        }
    }

    pub fn exponent(&self) -> &Exponent {
        &self.s
    }

    /// Orders `σ_s(lv)` against `σ_s(rv)` given their factorizations.
    pub fn decide(
        &self,
        n: u64,
        lv: u64,
        lf: &[(u64, u32)],
        rv: u64,
        rf: &[(u64, u32)],
    ) -> Result<Decision> {
        let exact = |ord| Ok(Decision { ord, bits: 0 });
        if lv == rv {
            return exact(Ordering::Equal);
        }
        match self.mode {
            Mode::NonNeg(k) => match (sigma_u128(lf, k), sigma_u128(rf, k)) {
                (Some(x), Some(y)) => exact(x.cmp(&y)),
                _ => exact(sigma_big(lf, k).cmp(&sigma_big(rf, k))),
            },
            Mode::Neg(r) => {
                // σ_{-r}(L) = σ_r(L) / L^r, so cross-multiply.
                let fast = (|| {
                    let x = sigma_u128(lf, r)?.checked_mul((rv as u128).checked_pow(r)?)?;
                    let y = sigma_u128(rf, r)?.checked_mul((lv as u128).checked_pow(r)?)?;
                    Some(x.cmp(&y))
                })();
                match fast {
                    Some(o) => exact(o),
                    None => {
                        let x = sigma_big(lf, r) * BigUint::from(rv).pow(r);
                        let y = sigma_big(rf, r) * BigUint::from(lv).pow(r);
                        exact(x.cmp(&y))
                    }
                }
            }
            Mode::Fractional { u, v } => {
                if let (Some(x), Some(y)) = (self.sigma_f64(lf, u, v), self.sigma_f64(rf, u, v)) {
                    if let Some(ord) = x.try_cmp(y) {
                        return Ok(Decision { ord, bits: F64_BITS });
                    }
                }
                self.decide_balls(n, lf, rf)
            }
            Mode::Slow => self.decide_balls(n, lf, rf),
        }
    }

    #[inline]
    fn sigma_f64(&self, f: &[(u64, u32)], u: i64, v: u32) -> Option<Interval> {
        let mut acc = Interval::ONE;
        for &(p, alpha) in f {
            let y = if p < CACHE_LIMIT {
                self.cache[p as usize]?
            } else {
                pow_ratio_u64(p, u, v)?
            };
            acc = acc.mul(geometric(y, alpha));
        }
        acc.is_finite().then_some(acc)
    }

    fn decide_balls(&self, n: u64, lf: &[(u64, u32)], rf: &[(u64, u32)]) -> Result<Decision> {
        let (lf, rf) = (Factorization::from_u64_pairs(lf), Factorization::from_u64_pairs(rf));
        let mut last = 0;
        for &prec in &self.ladder {
            let x = sigma_s(&lf, &self.s, prec)?;
            let y = sigma_s(&rf, &self.s, prec)?;
            if let Some(ord) = compare(&x, &y).ordering() {
                let bits = if x.is_exact() && y.is_exact() { 0 } else { prec };
                return Ok(Decision { ord, bits });
            }
            last = prec;
        }
        Err(Error::Undecided { n, precision: last })
    }

    /// Both sides at the precision a decision used.
    pub fn values(
        &self,
        lf: &[(u64, u32)],
        rf: &[(u64, u32)],
        bits: u32,
    ) -> Result<(ScalarValue, ScalarValue)> {
        let prec = bits.max(self.ladder[0]);
        Ok((
            sigma_s(&Factorization::from_u64_pairs(lf), &self.s, prec)?,
            sigma_s(&Factorization::from_u64_pairs(rf), &self.s, prec)?,
        ))
    }
}

/// `σ_k` in `u128`, `None` on overflow.
#[inline]
fn sigma_u128(f: &[(u64, u32)], k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for &(p, alpha) in f {
        let g = if k == 0 {
            alpha as u128 + 1
        } else {
            let pk = (p as u128).checked_pow(k)?;
            let mut g: u128 = 1;
            for _ in 0..alpha {
                g = g.checked_mul(pk)?.checked_add(1)?;
            }
            g
        };
        acc = acc.checked_mul(g)?;
    }
    Some(acc)
}

fn sigma_big(f: &[(u64, u32)], k: u32) -> BigUint {
    sigma_nonneg_int(&Factorization::from_u64_pairs(f), k)
}

//! Two-sided bounds on `σ_s(an+b)/σ_s(cn+d)` that hold for every `n >= 1`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::zeta_upper;
use crate::error::{Error, Result};
use crate::numerics::{pow_scalar, Exponent, ScalarValue};
use crate::sigma::{factor_u64, sigma_s, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `ad = bc`: bounds from `r₁(a,b) = r₂(c,d)`.
    ProportionalPair,
    /// `|s| > 1`: bounds from `1 <= σ_|s|(n)/n^|s| <= ζ(|s|)`.
    ZetaSandwich,
}

/// `lo <= σ_s(an+b)/σ_s(cn+d) <= hi` for all `n >= 1`. Each side is an
/// enclosure of a bound: use `lo.bounds().0` and `hi.bounds().1`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioBounds {
    pub lo: ScalarValue,
    pub hi: ScalarValue,
    pub provenance: Provenance,
}

impl RatioBounds {
    /// Rational outer bounds.
    pub fn outer(&self) -> (BigRational, BigRational) {
        (self.lo.bounds().0, self.hi.bounds().1)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let (lo, hi) = self.outer();
        lo <= *x && *x <= hi
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairBounds {
    pub r1: u64,
    pub r2: u64,
    #[serde(flatten)]
    pub bounds: RatioBounds,
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sigma_small(n: u64, s: &Exponent, prec: u32) -> Result<ScalarValue> {
    sigma_s(&Factorization::from_u64_pairs(&factor_u64(n, 1)), s, prec)
}

pub fn bounds_ad_eq_bc(a: u64, b: u64, c: u64, d: u64, s: &Exponent, prec: u32) -> Result<PairBounds> {
    if a == 0 || c == 0 {
        return Err(Error::Precondition("a and c must be positive".into()));
    }
    if a as u128 * d as u128 != b as u128 * c as u128 {
        return Err(Error::WrongRegime(format!("ad != bc for ({a}, {b}, {c}, {d})")));
    }
    let g = a.gcd(&c);
    let (r1, r2) = (c / g, a / g);
    let lo = pow_scalar(&ratio(r2, 1), s, prec)?.div(&sigma_small(r1, s, prec)?)?;
    let hi = sigma_small(r2, s, prec)?.div(&pow_scalar(&ratio(r1, 1), s, prec)?)?;
    Ok(PairBounds {
        r1,
        r2,
        bounds: RatioBounds {
            lo,
            hi,
            provenance: Provenance::ProportionalPair,
        },
    })
}

/// How `(an+b)/(cn+d)` moves as `n` grows: up when `ad > bc`.
pub fn ratio_trend(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    (a as u128 * d as u128).cmp(&(b as u128 * c as u128))
}

/// `(inf, sup)` of `(an+b)/(cn+d)` over `n >= 1`; one end is the limit `a/c`.
pub fn ratio_range(a: u64, b: u64, c: u64, d: u64) -> (BigRational, BigRational) {
    let first = ratio(a + b, c + d);
    let limit = ratio(a, c);
    match ratio_trend(a, b, c, d) {
        Ordering::Greater => (first, limit),
        _ => (limit, first),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalBounds {
    #[serde(with = "crate::codec::rational")]
    pub r: BigRational,
    #[serde(with = "crate::codec::rational")]
    pub m: BigRational,
    /// Upper bound used for `ζ(|s|)`.
    #[serde(with = "crate::codec::rational")]
    pub zeta_hi: BigRational,
    #[serde(flatten)]
    pub bounds: RatioBounds,
}

pub fn global_bounds_large_s(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    s: &Exponent,
    prec: u32,
    zeta_cap: u64,
) -> Result<GlobalBounds> {
    if a == 0 || c == 0 {
        return Err(Error::Precondition("a and c must be positive".into()));
    }
    let abs = s.abs();
    if !abs.exceeds_one() {
        return Err(Error::WrongRegime(format!("needs |s| > 1, got s = {s}")));
    }
    let (inf, sup) = ratio_range(a, b, c, d);
    let one = BigRational::one();
    let r = inf.min(one.clone());
    let m = sup.max(one);
    let zeta_hi = zeta_upper(&abs, zeta_cap)?;
    let z = ScalarValue::Exact(zeta_hi.clone());
    let lo = pow_scalar(&r, &abs, prec)?.div(&z)?;
    let hi = pow_scalar(&m, &abs, prec)?.mul(&z);
    Ok(GlobalBounds {
        r,
        m,
        zeta_hi,
        bounds: RatioBounds {
            lo,
            hi,
            provenance: Provenance::ZetaSandwich,
        },
    })
}

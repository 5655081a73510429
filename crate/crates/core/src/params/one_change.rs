//! Parameter families where `σ_s(an+b) - σ_s(cn+d)` changes sign once, with
//! `'<'` for `n <= M` and `'>'` from some point on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::{zeta_bounds, Truth, ROUNDS};
use crate::error::{Error, Result};
use crate::numerics::{solve_zeta_threshold, Exponent};

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ceil_u64(r: &BigRational) -> Result<u64> {
    r.ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Resource(format!("d = {} does not fit in u64", r.ceil())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DCheck {
    pub d: u64,
    /// `Holds` when `d` meets the bound for the true `ζ(s0)`.
    pub truth: Truth,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinDReport {
    pub s0: Exponent,
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    #[serde(with = "crate::codec::rational")]
    pub zeta_lo: BigRational,
    #[serde(with = "crate::codec::rational")]
    pub zeta_hi: BigRational,
    /// Enclosure of `ζ(s0)b + (M+1)(aζ(s0) - c)`.
    #[serde(with = "crate::codec::rational")]
    pub bound_lo: BigRational,
    #[serde(with = "crate::codec::rational")]
    pub bound_hi: BigRational,
    /// `⌈bound_hi⌉`.
    pub min_d: u64,
    /// Whether `min_d` is also the least integer above the true bound.
    pub min_d_exact: bool,
    pub check: Option<DCheck>,
}

/// Least `d` with `d >= ζ(s0)b + (M+1)(aζ(s0) - c)`, for which
/// `σ_s(an+b) < σ_s(cn+d)` on `n <= M` and `>` for all large `n`, uniformly
/// in `s >= s0`. Optionally validates a proposed `check_d`.
pub fn one_change_min_d(
    s0: &Exponent,
    m: u64,
    a: u64,
    b: u64,
    c: u64,
    check_d: Option<u64>,
    zeta_cap: u64,
) -> Result<MinDReport> {
    if !s0.exceeds_one() {
        return Err(Error::Precondition(format!("s0 must exceed 1, got {s0}")));
    }
    if c == 0 {
        return Err(Error::Precondition("c must be positive".into()));
    }
    let k = int(m) + BigRational::one();
    let coef = int(b) + &k * int(a);
    let offset = &k * int(c);
    let bound = |z: &BigRational| z * &coef - &offset;
    let mut last = None;
    for round in 0..ROUNDS {
        let (zlo, zhi) = match zeta_bounds(s0, round, zeta_cap) {
            Ok(z) => z,
            Err(Error::PrecisionUnreachable { .. }) if round > 0 => break,
            Err(e) => return Err(e),
        };
        if int(a) <= int(c) * &zlo {
            return Err(Error::Precondition(format!("a = {a} <= c·zeta(s0) for c = {c}, s0 = {s0}")));
        }
        let pre_ok = int(a) > int(c) * &zhi;
        let (lo, hi) = (bound(&zlo), bound(&zhi));
        let exact = lo.ceil() == hi.ceil();
        let check = check_d.map(|d| DCheck {
            d,
            truth: if int(d) >= hi {
                Truth::Holds
            } else if int(d) < lo {
                Truth::Fails
            } else {
                Truth::Undecided
            },
        });
        let settled = pre_ok && exact && check.is_none_or(|c| c.truth != Truth::Undecided);
        last = Some((zlo, zhi, lo, hi, exact, check, pre_ok));
        if settled {
            break;
        }
    }
    let Some((zeta_lo, zeta_hi, bound_lo, bound_hi, min_d_exact, check, pre_ok)) = last else {
        return Err(Error::PrecisionUnreachable {
            reason: format!("no zeta({s0}) enclosure within the term cap"),
            achievable: "none".into(),
        });
    };
    if !pre_ok {
        return Err(Error::PrecisionUnreachable {
            reason: format!("a > c·zeta(s0) could not be settled for a = {a}, c = {c}"),
            achievable: crate::codec::format_ratio(&(&zeta_hi - &zeta_lo)),
        });
    }
    Ok(MinDReport {
        s0: s0.clone(),
        m,
        a,
        b,
        c,
        min_d: ceil_u64(&bound_hi)?,
        zeta_lo,
        zeta_hi,
        bound_lo,
        bound_hi,
        min_d_exact,
        check,
    })
}

/// Exact parameters with the crossing at `n = M + 1` for every `s >= s0`.
#[derive(Debug, Clone, Serialize)]
pub struct OneChangeParams {
    pub m: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub q1: u64,
    pub q2: u64,
    /// `(M + q1/q2)(a - c) + b`.
    pub d: u64,
    /// `ζ(s) < x1` keeps `'<'` through `n = M`.
    #[serde(with = "crate::codec::rational")]
    pub x1: BigRational,
    /// `ζ(s) < x2` gives `'>'` from `n = M + 1`.
    #[serde(with = "crate::codec::rational")]
    pub x2: BigRational,
    /// `min((d - b)/b, 2)`: `ζ(s)` must also stay below it.
    #[serde(with = "crate::codec::rational")]
    pub alpha: BigRational,
    #[serde(with = "crate::codec::rational")]
    pub threshold: BigRational,
    /// Least integer `s0` with `ζ(s0) < threshold`.
    pub s0: Exponent,
    pub s0_real: Option<Exponent>,
    /// Upper end of the `ζ(s0)` enclosure certifying `s0`.
    #[serde(with = "crate::codec::rational")]
    pub zeta_hi: BigRational,
}

pub fn one_change_params(
    m: u64,
    a: u64,
    b: u64,
    c: u64,
    q1: u64,
    q2: u64,
    real: bool,
    zeta_cap: u64,
) -> Result<OneChangeParams> {
    let pre = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(what.into()))
        }
    };
    pre(m >= 1, "M must be at least 1")?;
    pre(b >= 1, "b must be at least 1")?;
    pre(c > b, "c must exceed b")?;
    pre(a > c.saturating_mul(2), "a must exceed 2c")?;
    pre(0 < q1 && q1 < q2, "need 0 < q1 < q2")?;
    pre(q1.gcd(&q2) == 1, "q1 and q2 must be coprime")?;
    pre((a - c) % q2 == 0, "q2 must divide a - c")?;
    let d = m
        .checked_mul(a - c)
        .and_then(|v| v.checked_add(q1 * ((a - c) / q2)))
        .and_then(|v| v.checked_add(b))
        .ok_or_else(|| Error::Resource("d overflows u64".into()))?;
    let (mq, dq, aq, bq, cq) = (int(m), int(d), int(a), int(b), int(c));
    let x1 = (&dq + &mq * &cq) / (&mq * &aq + &bq);
    let m1 = &mq + BigRational::one();
    let x2 = (&m1 * &aq + &bq) / (&dq + &m1 * &cq);
    let alpha = ((&dq - &bq) / &bq).min(int(2));
    let threshold = x1.clone().min(x2.clone()).min(alpha.clone());
    let th = solve_zeta_threshold(&threshold, true, zeta_cap)?;
    let s0_real = if real {
        Some(solve_zeta_threshold(&threshold, false, zeta_cap)?.s)
    } else {
        None
    };
    Ok(OneChangeParams {
        m,
        a,
        b,
        c,
        q1,
        q2,
        d,
        x1,
        x2,
        alpha,
        threshold,
        s0: th.s,
        s0_real,
        zeta_hi: th.enclosure.hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 10_000_000;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn min_d_examples() {
        let s2 = Exponent::integer(2);
        let r = one_change_min_d(&s2, 0, 5, 0, 2, None, CAP).unwrap();
        // 5ζ(2) - 2 ≈ 6.2247
        assert_eq!(r.min_d, 7);
        assert!(r.min_d_exact);
        let r = one_change_min_d(&s2, 999_999, 5, 1, 2, Some(6_224_673), CAP).unwrap();
        assert_eq!(r.check.unwrap().truth, Truth::Holds);
        assert!(r.min_d_exact);
        let below = one_change_min_d(&s2, 999_999, 5, 1, 2, Some(r.min_d - 1), CAP).unwrap();
        assert_eq!(below.check.unwrap().truth, Truth::Fails);
        let at = one_change_min_d(&s2, 999_999, 5, 1, 2, Some(r.min_d), CAP).unwrap();
        assert_eq!(at.check.unwrap().truth, Truth::Holds);
        // 2ζ(2) ≈ 3.29 > 3
        assert!(matches!(
            one_change_min_d(&s2, 5, 3, 0, 2, None, CAP),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exact_params_examples() {
        let p = one_change_params(9999, 5, 1, 2, 1, 3, false, CAP).unwrap();
        assert_eq!(p.d, 29999);
        assert_eq!(p.x1, q(49997, 49996));
        assert_eq!(p.x2, q(50001, 49999));
        assert_eq!(p.s0, Exponent::integer(16));
        let p = one_change_params(1, 5, 1, 2, 1, 3, false, CAP).unwrap();
        assert_eq!(p.d, 5);
        assert_eq!((p.x1.clone(), p.x2.clone()), (q(7, 6), q(11, 9)));
        assert!(matches!(
            one_change_params(1, 5, 1, 2, 1, 2, false, CAP),
            Err(Error::Precondition(_))
        ));
        assert!(one_change_params(1, 4, 1, 2, 1, 2, false, CAP).is_err());
    }
}

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::factor::Factorization;
use crate::error::{Error, Result};
use crate::numerics::{pow_scalar, Exponent, ExponentKind, ScalarValue};

/// Guard bits carried through products of many balls.
fn guard_prec(prec: u32, f: &Factorization) -> u32 {
    let terms: u32 = f.factors.iter().map(|p| p.alpha + 1).sum();
    prec + 16 + 32 - terms.max(1).leading_zeros()
}

/// `1 + p^k + ... + p^(αk)` for `k >= 0`.
fn geometric_big(p: &BigUint, k: u32, alpha: u32) -> BigUint {
    if k == 0 {
        return BigUint::from(alpha + 1);
    }
    let pk = p.pow(k);
    let mut acc = BigUint::one();
    for _ in 0..alpha {
        acc = acc * &pk + 1u32;
    }
    acc
}

/// `σ_k(n)` for an integer `k >= 0`.
pub fn sigma_nonneg_int(f: &Factorization, k: u32) -> BigUint {
    f.factors
        .iter()
        .map(|pp| geometric_big(&pp.p, k, pp.alpha))
        .fold(BigUint::one(), |a, b| a * b)
}

/// `σ_s(n) = ∏ (1 + p^s + ... + p^(αs))`.
pub fn sigma_s(f: &Factorization, s: &Exponent, prec: u32) -> Result<ScalarValue> {
    if let ExponentKind::Integer(k) = *s.kind() {
        let r = k.unsigned_abs();
        let r: u32 = r
            .try_into()
            .map_err(|_| Error::Domain(format!("exponent {k} too large")))?;
        let pos = BigInt::from(sigma_nonneg_int(f, r));
        if k >= 0 {
            return Ok(ScalarValue::Exact(BigRational::from_integer(pos)));
        }
        let den = BigInt::from(f.n.pow(r));
        return Ok(ScalarValue::Exact(BigRational::new(pos, den)));
    }
    let wp = guard_prec(prec, f);
    let mut acc = ScalarValue::from_int(1);
    for pp in &f.factors {
        let p = BigRational::from_integer(BigInt::from(pp.p.clone()));
        let y = pow_scalar(&p, s, wp)?;
        let mut g = ScalarValue::from_int(1);
        for _ in 0..pp.alpha {
            g = g.mul(&y).add(&ScalarValue::from_int(1));
        }
        acc = acc.mul(&g);
    }
    Ok(match acc {
        ScalarValue::Ball(b) => ScalarValue::Ball(b.with_prec(prec)),
        exact => exact,
    })
}

/// `(σ_{-r}(m), σ_r(m) / m^r)`, two routes to the same value.
pub fn sigma_reflect_check(
    f: &Factorization,
    r: &Exponent,
    prec: u32,
) -> Result<(ScalarValue, ScalarValue)> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("reflection needs r > 0, got {r}")));
    }
    let left = sigma_s(f, &r.neg(), prec)?;
    let num = sigma_s(f, r, prec)?;
    let m = BigRational::from_integer(BigInt::from(f.n.clone()));
    let den = pow_scalar(&m, r, guard_prec(prec, f))?;
    Ok((left, num.div(&den)?))
}

/// `τ, σ, φ, ω, Ω` of one number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmallFunctions {
    #[serde(with = "crate::codec::biguint")]
    pub tau: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub sigma: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub phi: BigUint,
    pub omega: u32,
    pub big_omega: u32,
}

pub fn small_functions(f: &Factorization) -> SmallFunctions {
    let mut phi = BigUint::one();
    for pp in &f.factors {
        phi *= pp.p.pow(pp.alpha - 1) * (&pp.p - 1u32);
    }
    SmallFunctions {
        tau: sigma_nonneg_int(f, 0),
        sigma: sigma_nonneg_int(f, 1),
        phi,
        omega: f.factors.len() as u32,
        big_omega: f.factors.iter().map(|p| p.alpha).sum(),
    }
}

/// All divisors in increasing order, refusing more than `cap` of them.
pub fn divisors(f: &Factorization, cap: u64) -> Result<Vec<BigUint>> {
    let count = f
        .factors
        .iter()
        .try_fold(1u64, |acc, pp| acc.checked_mul(pp.alpha as u64 + 1));
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::Resource(format!(
                "{} has more than {cap} divisors",
                f.n
            )))
        }
    }
    let mut out = vec![BigUint::one()];
    for pp in &f.factors {
        let base = out.clone();
        let mut pk = BigUint::one();
        for _ in 0..pp.alpha {
            pk *= &pp.p;
            out.extend(base.iter().map(|d| d * &pk));
        }
    }
    out.sort();
    Ok(out)
}

/// `σ_s(n, q, a)`: the sum of `d^s` over divisors `d ≡ a (mod q)`.
pub fn sigma_restricted(
    f: &Factorization,
    q: u64,
    residue: u64,
    s: &Exponent,
    prec: u32,
    divisor_cap: u64,
) -> Result<ScalarValue> {
    if q < 2 {
        return Err(Error::Domain(format!("modulus {q} must be at least 2")));
    }
    if residue >= q {
        return Err(Error::Domain(format!("residue {residue} not reduced modulo {q}")));
    }
    let wp = prec + 16 + 64 - (f.factors.len() as u64 + 1).leading_zeros();
    let mut acc = ScalarValue::from_int(0);
    for d in divisors(f, divisor_cap)? {
        if (&d % q).to_u64() == Some(residue) {
            let dv = BigRational::from_integer(BigInt::from(d));
            acc = acc.add(&pow_scalar(&dv, s, wp)?);
        }
    }
    Ok(match acc {
        ScalarValue::Ball(b) => ScalarValue::Ball(b.with_prec(prec)),
        exact => exact,
    })
}

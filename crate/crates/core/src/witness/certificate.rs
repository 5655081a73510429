//! Rigorous ratio bounds for a witness, checkable from `δ`, `q` and the
//! primes of `m_k` alone.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::newman::NewmanWitness;
use crate::error::{Error, Result};
use crate::numerics::{pow_scalar, Exponent, ScalarValue};
use crate::sigma::{factorize, sigma_s, small_functions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `σ_s(an+b) < σ_s(cn+d)` is proven (given the primality of `q`).
    CertifiedLess,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub s: Exponent,
    pub prec: u32,
    /// Upper bound on `σ_s(an+b) / (an+b)^s = σ_{-s}(δ)(1 + q^{-s})`.
    #[serde(with = "crate::codec::rational")]
    pub upper_left: BigRational,
    /// Lower bound on `σ_s(cn+d) / (cn+d)^s`, from the primes of `m_k`.
    #[serde(with = "crate::codec::rational")]
    pub lower_right: BigRational,
    /// Upper bound on `((an+b)/(cn+d))^s`.
    #[serde(with = "crate::codec::rational")]
    pub scale_upper: BigRational,
    /// Upper bound on `σ_s(an+b) / σ_s(cn+d)`.
    #[serde(with = "crate::codec::rational")]
    pub ratio_bound: BigRational,
    pub verdict: Verdict,
}

fn hi(v: &ScalarValue) -> BigRational {
    v.bounds().1
}

fn lo(v: &ScalarValue) -> BigRational {
    v.bounds().0
}

fn int(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

/// Bounds `σ_s(an+b)/σ_s(cn+d)` from above for `0 <= s <= 1`.
///
/// At `s = 0` the same bounds count divisors: `2τ(δ)` against `2^ω(m_k)`.
pub fn certify_ratio(w: &NewmanWitness, s: &Exponent, prec: u32) -> Result<Certificate> {
    if s.is_negative() || s.value() > &BigRational::one() {
        return Err(Error::Domain(format!(
            "ratio certificates cover 0 <= s <= 1, got {s}; negative s goes through reflection"
        )));
    }
    let wp = prec + 32;
    let neg = s.neg();
    let delta_f = factorize(&w.delta, None, 1 << 20, 1)?;
    let left_norm = sigma_s(&delta_f, &neg, wp)?
        .mul(&ScalarValue::from_int(1).add(&pow_scalar(&int(&w.q), &neg, wp)?));
    let mut right_norm = ScalarValue::from_int(1);
    for &p in &w.primes {
        let term = ScalarValue::from_int(1).add(&pow_scalar(&BigRational::from_integer(p.into()), &neg, wp)?);
        right_norm = right_norm.mul(&term);
    }
    let left_val = &w.n * w.a + w.b;
    let right_val = &w.n * w.c + w.d;
    let quotient = BigRational::new(BigInt::from(left_val), BigInt::from(right_val));
    let scale = pow_scalar(&quotient, s, wp)?;
    let upper_left = hi(&left_norm);
    let lower_right = lo(&right_norm);
    let scale_upper = hi(&scale);
    let ratio_bound = &upper_left * &scale_upper / &lower_right;
    let verdict = if ratio_bound < BigRational::one() {
        Verdict::CertifiedLess
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        s: s.clone(),
        prec,
        upper_left,
        lower_right,
        scale_upper,
        ratio_bound,
        verdict,
    })
}

/// Counting analogue: `ω(an+b) <= 1 + ω(|ad-bc|)` and `ω(cn+d) >= ω(m_k)`,
/// likewise for `Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaCertificate {
    pub omega_upper_left: u32,
    pub omega_lower_right: u32,
    /// `ω(an+b) < ω(cn+d)` is proven.
    pub omega_certified: bool,
    pub big_omega_upper_left: u32,
    pub big_omega_lower_right: u32,
    pub big_omega_certified: bool,
}

pub fn certify_omega(w: &NewmanWitness) -> Result<OmegaCertificate> {
    let det = (BigInt::from(w.a) * w.d - BigInt::from(w.b) * w.c).magnitude().clone();
    let f = small_functions(&factorize(&det, None, 1 << 20, 1)?);
    let lower = w.primes.len() as u32;
    Ok(OmegaCertificate {
        omega_upper_left: 1 + f.omega,
        omega_lower_right: lower,
        omega_certified: 1 + f.omega < lower,
        big_omega_upper_left: 1 + f.big_omega,
        big_omega_lower_right: lower,
        big_omega_certified: 1 + f.big_omega < lower,
    })
}

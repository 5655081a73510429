//! Races with equal moduli, `σ_s(an+b)` against `σ_s(an+d)`, won both ways.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{compare, Comparison, Exponent};
use crate::sigma::{factorize, primality, sigma_s, Certainty};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrtWitness {
    pub s: Exponent,
    pub a: u64,
    /// After normalization `b < d`.
    pub b: u64,
    pub d: u64,
    /// Whether the caller's `b` and `d` were exchanged to get `b < d`.
    pub swapped: bool,
    /// `m` with `am + b` prime, so `σ_s(am+b) < σ_s(am+d)`.
    #[serde(with = "crate::codec::biguint")]
    pub m: BigUint,
    pub m_certainty: Certainty,
    pub m_comparison: Comparison,
    /// `d - b`.
    pub ell: u64,
    /// `⌈s⌉`.
    pub k: u64,
    pub q: u64,
    /// `max(d, ℓ + ℓkq^(k+1))`; `p` exceeds it.
    #[serde(with = "crate::codec::biguint")]
    pub threshold: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub p: BigUint,
    pub p_certainty: Certainty,
    /// `(p - d)/a`, so `an + d = p` and `q | an + b`.
    #[serde(with = "crate::codec::biguint")]
    pub n: BigUint,
    /// `σ_s(an+b)` against `σ_s(an+d)`: `Greater` when certified.
    pub n_comparison: Comparison,
    pub prec: u32,
}

fn compare_at(a: &BigUint, b: &BigUint, s: &Exponent, ladder: &[u32]) -> Result<(Comparison, u32)> {
    let fa = factorize(a, None, 1 << 24, 1)?;
    let fb = factorize(b, None, 1 << 24, 1)?;
    let mut last = (Comparison::Undecided(0), 0);
    for &prec in ladder {
        let (x, y) = (sigma_s(&fa, s, prec)?, sigma_s(&fb, s, prec)?);
        let c = compare(&x, &y);
        last = (c, if x.is_exact() && y.is_exact() { 0 } else { prec });
        if c.ordering().is_some() {
            break;
        }
    }
    Ok(last)
}

pub fn crt_witness(
    a: u64,
    b: u64,
    d: u64,
    s: &Exponent,
    q: Option<u64>,
    budget: u64,
    ladder: &[u32],
) -> Result<CrtWitness> {
    if a == 0 {
        return Err(Error::Precondition("a must be positive".into()));
    }
    if b == d {
        return Err(Error::Precondition("b and d must differ".into()));
    }
    if a.gcd(&b) != 1 || a.gcd(&d) != 1 {
        return Err(Error::Precondition(format!("need gcd(a, b) = gcd(a, d) = 1 for a = {a}, b = {b}, d = {d}")));
    }
    if !s.is_positive() {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let swapped = b > d;
    let (b, d) = if swapped { (d, b) } else { (b, d) };
    let ell = d - b;
    let k = s
        .ceil()
        .to_u64()
        .filter(|&k| k <= 64)
        .ok_or_else(|| Error::Resource(format!("⌈s⌉ too large for s = {s}")))?;
    let q = match q {
        Some(q) => {
            if !crate::sigma::is_prime_u64(q) {
                return Err(Error::Precondition(format!("q = {q} is not prime")));
            }
            if (a as u128 * ell as u128) % q as u128 == 0 {
                return Err(Error::Precondition(format!("q = {q} divides a(d - b)")));
            }
            q
        }
        None => smallest_prime_not_dividing(a as u128 * ell as u128),
    };

    // Part (i): am + b prime.
    let (bb, dd) = (BigUint::from(b), BigUint::from(d));
    let mut m = BigUint::one();
    let m_certainty = loop {
        if m > BigUint::from(budget) {
            return Err(Error::Budget(format!("no prime {a}m + {b} with m <= {budget}")));
        }
        if let Some(c) = primality(&(&m * a + &bb)) {
            break c;
        }
        m += 1u32;
    };
    let (m_comparison, prec_m) = compare_at(&(&m * a + &bb), &(&m * a + &dd), s, ladder)?;

    // Part (ii): p ≡ ℓ (mod q), p ≡ d (mod a), p above the threshold.
    let modulus = BigInt::from(q) * a;
    let e = BigInt::from(q).extended_gcd(&BigInt::from(a));
    debug_assert!(e.gcd.is_one());
    // r = ℓ·a·(a^{-1} mod q) + d·q·(q^{-1} mod a)
    let r = (BigInt::from(ell) * a * &e.y + BigInt::from(d) * q * &e.x).mod_floor(&modulus);
    let r = r.to_biguint().expect("nonnegative");
    let modulus = modulus.to_biguint().expect("positive");
    let threshold = (BigUint::from(ell) + BigUint::from(ell) * k * BigUint::from(q).pow(k as u32 + 1)).max(dd.clone());
    // Smallest p > threshold with p ≡ r.
    let above = &threshold + 1u32;
    let mut p = &above + ((&modulus + &r) - (&above % &modulus)) % &modulus;
    let mut tried = 0u64;
    let p_certainty = loop {
        if tried >= budget {
            return Err(Error::Budget(format!("no admissible prime among {budget} candidates")));
        }
        if let Some(c) = primality(&p) {
            break c;
        }
        p += &modulus;
        tried += 1;
    };
    let n = (&p - &dd) / a;
    let (n_comparison, prec_n) = compare_at(&(&n * a + &bb), &p, s, ladder)?;
    let w = CrtWitness {
        s: s.clone(),
        a,
        b,
        d,
        swapped,
        m,
        m_certainty,
        m_comparison,
        ell,
        k,
        q,
        threshold,
        p,
        p_certainty,
        n,
        n_comparison,
        prec: prec_m.max(prec_n),
    };
    check_crt(&w)?;
    Ok(w)
}

/// Smallest prime not dividing `x`.
pub fn smallest_prime_not_dividing(x: u128) -> u64 {
    (2u64..)
        .filter(|&p| crate::sigma::is_prime_u64(p))
        .find(|&p| x % p as u128 != 0)
        .expect("infinitely many primes")
}

/// Exact re-check of the congruences and of both certified comparisons.
pub fn check_crt(w: &CrtWitness) -> Result<()> {
    let fail = |what: String| Err(Error::Verification(format!("crt witness: {what}")));
    let p = &w.p;
    if w.b >= w.d || w.ell != w.d - w.b {
        return fail("b < d and ℓ = d - b must hold".into());
    }
    if (p % w.q).to_u64() != Some(w.ell % w.q) {
        return fail(format!("p ≢ ℓ (mod {})", w.q));
    }
    if (p % w.a).to_u64() != Some(w.d % w.a) {
        return fail(format!("p ≢ d (mod {})", w.a));
    }
    if p <= &w.threshold || w.n.is_zero() {
        return fail("p must exceed the threshold".into());
    }
    if &w.n * w.a + w.d != *p {
        return fail("an + d != p".into());
    }
    if !((&w.n * w.a + w.b) % w.q).is_zero() {
        return fail("q ∤ an + b".into());
    }
    if primality(p) != Some(w.p_certainty) || primality(&(&w.m * w.a + w.b)) != Some(w.m_certainty) {
        return fail("primality check failed".into());
    }
    if w.m_comparison != Comparison::Less {
        return fail(format!("σ_s(am+b) vs σ_s(am+d) gave {:?}", w.m_comparison));
    }
    if w.n_comparison != Comparison::Greater {
        return fail(format!("σ_s(an+b) vs σ_s(an+d) gave {:?}", w.n_comparison));
    }
    Ok(())
}

/// Recomputes both comparisons from scratch.
pub fn recheck_comparisons(w: &CrtWitness, ladder: &[u32]) -> Result<(Comparison, Comparison)> {
    let am = &w.m * w.a;
    let an = &w.n * w.a;
    let (cm, _) = compare_at(&(&am + w.b), &(&am + w.d), &w.s, ladder)?;
    let (cn, _) = compare_at(&(&an + w.b), &(&an + w.d), &w.s, ladder)?;
    Ok((cm, cn))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LADDER: [u32; 3] = [128, 256, 512];

    #[test]
    fn worked_example() {
        let w = crt_witness(2, 1, 3, &Exponent::integer(1), Some(5), 1000, &LADDER).unwrap();
        assert_eq!((w.ell, w.k, w.q), (2, 1, 5));
        assert_eq!(w.threshold, BigUint::from(52u32));
        // 57 = 3·19 is skipped; σ(65) = 84 > σ(67) = 68.
        assert_eq!(w.p, BigUint::from(67u32));
        assert_eq!(w.n, BigUint::from(32u32));
        assert_eq!(w.m, BigUint::one());
        assert_eq!(recheck_comparisons(&w, &LADDER).unwrap(), (Comparison::Less, Comparison::Greater));
    }

    #[test]
    fn swap_and_defaults() {
        let w = crt_witness(6, 7, 1, &"1/2".parse().unwrap(), None, 100_000, &LADDER).unwrap();
        assert!(w.swapped);
        assert_eq!((w.b, w.d, w.ell), (1, 7, 6));
        // 6·6 = 36: the smallest prime not dividing it is 5.
        assert_eq!(w.q, 5);
        check_crt(&w).unwrap();
        assert!(crt_witness(4, 2, 3, &Exponent::integer(1), None, 10, &LADDER).is_err());
        assert!(crt_witness(2, 1, 3, &Exponent::integer(1), Some(3), 10, &LADDER).is_ok());
        assert!(crt_witness(2, 1, 3, &Exponent::integer(1), Some(2), 10, &LADDER).is_err());
    }
}

//! Witnesses where `an+b` is a small divisor times one large prime while
//! `cn+d` is divisible by every small prime not dividing `c`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigma::{factorize, nth_prime, primality, primes_up_to, small_functions, Certainty};

/// `m_k`: the product of the primes `p <= p_k` with `p ∤ c`, and those primes.
pub fn build_modulus(k: usize, c: u64) -> Result<(BigUint, Vec<u64>)> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let primes: Vec<u64> = primes_up_to(nth_prime(k))
        .into_iter()
        .filter(|p| c % p != 0)
        .collect();
    let m = primes.iter().fold(BigUint::one(), |acc, &p| acc * p);
    Ok((m, primes))
}

/// The least `n0 >= 0` with `c·n0 ≡ -d (mod m)`.
pub fn solve_linear_congruence(c: &BigUint, d: &BigUint, m: &BigUint) -> Result<BigUint> {
    if m.is_zero() {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let (ci, mi) = (BigInt::from(c.clone()), BigInt::from(m.clone()));
    let e = ci.extended_gcd(&mi);
    if !e.gcd.is_one() {
        return Err(Error::NoSolution(format!("gcd({c}, {m}) = {} is not 1", e.gcd)));
    }
    let n0 = (-BigInt::from(d.clone()) * e.x).mod_floor(&mi);
    Ok(n0.to_biguint().expect("reduced residue is nonnegative"))
}

/// Smallest `t >= 1` with `A + Bt` prime and greater than `lower`.
pub fn find_prime_in_ap(
    a: &BigUint,
    b: &BigUint,
    lower: &BigUint,
    budget: u64,
) -> Result<(u64, BigUint, Certainty)> {
    if b.is_zero() {
        return Err(Error::Precondition("step B must be positive".into()));
    }
    let g = a.gcd(b);
    if !g.is_one() {
        return Err(Error::Precondition(format!("gcd(A, B) = {g}, not 1")));
    }
    // Skip straight to the first t whose value exceeds `lower`.
    let mut t = if a > lower {
        1
    } else {
        ((lower - a) / b + 1u32).to_u64().unwrap_or(u64::MAX).max(1)
    };
    let start = t;
    while t - start < budget {
        let v = a + b * t;
        if let Some(c) = primality(&v) {
            return Ok((t, v, c));
        }
        t += 1;
    }
    Err(Error::Budget(format!(
        "no prime A + Bt > {lower} for t in [{start}, {t}) with A = {a}, B = {b}"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewmanWitness {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub k: usize,
    #[serde(with = "crate::codec::biguint")]
    pub m_k: BigUint,
    /// The primes dividing `m_k`.
    pub primes: Vec<u64>,
    #[serde(with = "crate::codec::biguint")]
    pub n0: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub n: BigUint,
    /// `cn + d = m_k·y`.
    #[serde(with = "crate::codec::biguint")]
    pub y: BigUint,
    #[serde(with = "crate::codec::biguint")]
    pub delta: BigUint,
    #[serde(rename = "A", with = "crate::codec::biguint")]
    pub big_a: BigUint,
    #[serde(rename = "B", with = "crate::codec::biguint")]
    pub big_b: BigUint,
    pub t: u64,
    /// The prime `A + Bt`; `an + b = δ·q`.
    #[serde(with = "crate::codec::biguint")]
    pub q: BigUint,
    pub q_certainty: Certainty,
    /// `2τ(|ad - bc|)`.
    #[serde(rename = "D", with = "crate::codec::biguint")]
    pub big_d: BigUint,
}

fn det_abs(a: u64, b: u64, c: u64, d: u64) -> BigUint {
    let det = BigInt::from(a) * d - BigInt::from(b) * c;
    det.abs().to_biguint().expect("absolute value")
}

pub fn construct_newman_witness(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    k: usize,
    budget: u64,
) -> Result<NewmanWitness> {
    if a == 0 || c == 0 {
        return Err(Error::Precondition("a and c must be positive".into()));
    }
    let det = det_abs(a, b, c, d);
    if det.is_zero() {
        return Err(Error::WrongRegime("ad = bc admits no sign change".into()));
    }
    let (m_k, primes) = build_modulus(k, c)?;
    let n0 = solve_linear_congruence(&c.into(), &d.into(), &m_k)?;
    let base = &n0 * a + b;
    let am = &m_k * a;
    let delta = base.gcd(&am);
    assert!(!delta.is_zero(), "a·m_k > 0 forces δ >= 1");
    let big_a = &base / &delta;
    let big_b = &am / &delta;
    let (t, q, q_certainty) = find_prime_in_ap(&big_a, &big_b, &det, budget)?;
    let n = &n0 + &m_k * t;
    let y = (&n * c + d) / &m_k;
    let det_f = factorize(&det, None, 1 << 20, 1)?;
    let big_d = small_functions(&det_f).tau * 2u32;
    let w = NewmanWitness {
        a,
        b,
        c,
        d,
        k,
        m_k,
        primes,
        n0,
        n,
        y,
        delta,
        big_a,
        big_b,
        t,
        q,
        q_certainty,
        big_d,
    };
    check_witness(&w)?;
    Ok(w)
}

/// Re-checks every structural identity of a witness with exact arithmetic.
pub fn check_witness(w: &NewmanWitness) -> Result<()> {
    let fail = |what: &str| Err(Error::Verification(format!("newman witness: {what}")));
    let (expected_m, expected_primes) = build_modulus(w.k, w.c)?;
    if w.m_k != expected_m || w.primes != expected_primes {
        return fail("m_k is not the product of the primes up to p_k not dividing c");
    }
    if &w.n * w.c + w.d != &w.m_k * &w.y {
        return fail("cn + d != m_k·y");
    }
    if &w.n * w.a + w.b != &w.delta * &w.q {
        return fail("an + b != δ·q");
    }
    if &w.big_a + &w.big_b * w.t != w.q {
        return fail("q != A + Bt");
    }
    if &w.delta * &w.big_b != &w.m_k * w.a || !w.big_a.gcd(&w.big_b).is_one() {
        return fail("A, B are not the reduced progression");
    }
    let det = det_abs(w.a, w.b, w.c, w.d);
    if det.is_zero() || !(&det % &w.delta).is_zero() {
        return fail("δ does not divide |ad - bc|");
    }
    if w.q <= det {
        return fail("q <= |ad - bc|");
    }
    match primality(&w.q) {
        Some(c) if c == w.q_certainty => {}
        _ => return fail("q failed its primality check"),
    }
    let det_f = factorize(&det, None, 1 << 20, 1)?;
    if w.big_d != small_functions(&det_f).tau * 2u32 {
        return fail("D != 2τ(|ad - bc|)");
    }
    if w.n.is_zero() {
        return fail("n must be positive");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(build_modulus(3, 30).unwrap(), (big(1), vec![]));
        assert_eq!(build_modulus(5, 30).unwrap().0, big(77));
        assert_eq!(build_modulus(10, 1).unwrap().0, big(6469693230));
    }

    #[test]
    fn congruence_examples() {
        // Exhaustive oracle over the residues.
        let brute = |c: u64, d: u64, m: u64| (0..m).find(|n| (c * n + d) % m == 0).unwrap();
        for (c, d, m) in [(30, 1, 77), (1, 0, 5), (3, 1, 7), (30, 7, 1001)] {
            assert_eq!(
                solve_linear_congruence(&big(c), &big(d), &big(m)).unwrap(),
                big(brute(c, d, m))
            );
        }
        assert!(solve_linear_congruence(&big(6), &big(1), &big(9)).is_err());
    }

    #[test]
    fn prime_in_ap_examples() {
        let (t, q, _) = find_prime_in_ap(&big(3), &big(4), &big(10), 100).unwrap();
        assert_eq!((t, q), (2, big(11)));
        let (t, q, _) = find_prime_in_ap(&big(1), &big(6), &big(100), 100).unwrap();
        assert_eq!((t, q), (17, big(103)));
        assert!(matches!(
            find_prime_in_ap(&big(2), &big(2), &big(1), 100),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            find_prime_in_ap(&big(1), &big(6), &big(113), 2),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn witnesses_check() {
        let w = construct_newman_witness(1, 0, 1, 1, 2, 1000).unwrap();
        assert_eq!(&w.n + 1u32, &w.m_k * &w.y);
        let w = construct_newman_witness(30, 0, 30, 1, 16, 100_000).unwrap();
        assert_eq!(w.primes.first(), Some(&7));
        assert_eq!(w.primes.last(), Some(&53));
        assert_eq!(w.primes.len(), 13);
        check_witness(&w).unwrap();
        let mut bad = w.clone();
        bad.y += 1u32;
        assert!(check_witness(&bad).is_err());
        assert!(construct_newman_witness(2, 0, 4, 0, 3, 10).is_err());
    }
}

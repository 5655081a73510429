//! Prime sieving and strong-probable-prime tests.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Every composite below this bound fails the strong test to one of the
/// first thirteen prime bases.
pub const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_BASES: [u64; 7] = [43, 47, 53, 59, 61, 67, 71];

/// Epistemic status of a primality claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Proven,
    Probable,
}

/// All primes `<= limit`, by an odd-only bit sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // Bit i stands for the odd number 2i + 1.
    let half = (limit as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; half.div_ceil(64)];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    for i in 1..half {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            out.push(2 * i as u64 + 1);
        }
    }
    out
}

/// The `k`-th prime, 1-indexed (`nth_prime(1) == 2`).
pub fn nth_prime(k: usize) -> u64 {
    assert!(k >= 1);
    let kf = k as f64;
    let mut bound = if k < 6 {
        15
    } else {
        (kf * (kf.ln() + kf.ln().ln())).ceil() as u64 + 3
    };
    loop {
        let ps = primes_up_to(bound);
        if ps.len() >= k {
            return ps[k - 1];
        }
        bound *= 2;
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn strong_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    BASES[..12].iter().all(|&a| strong_u64(n, a))
}

fn strong_big(n: &BigUint, a: u64) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let r = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> r;
    let mut x = BigUint::from(a).modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..r {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// `None` for composites, otherwise the certainty of the primality claim.
pub fn primality(n: &BigUint) -> Option<Certainty> {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v).then_some(Certainty::Proven);
    }
    for p in primes_up_to(1000) {
        if (n % p).is_zero() {
            return None;
        }
    }
    if !BASES.iter().all(|&a| strong_big(n, a)) {
        return None;
    }
    let bound: BigUint = DETERMINISTIC_BOUND.parse().expect("constant parses");
    if *n < bound {
        return Some(Certainty::Proven);
    }
    EXTRA_BASES
        .iter()
        .all(|&a| strong_big(n, a))
        .then_some(Certainty::Probable)
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    primality(n).is_some()
}

/// Modular inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

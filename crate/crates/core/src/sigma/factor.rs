use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::primes::{is_prime_u64, mul_mod, primality, primes_up_to, Certainty};
use crate::error::{Error, Result};

/// `n = ∏ p^α` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::codec::biguint")]
    pub n: BigUint,
    pub factors: Vec<PrimePower>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::codec::biguint")]
    pub p: BigUint,
    pub alpha: u32,
    pub certainty: Certainty,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            n: BigUint::one(),
            factors: Vec::new(),
        }
    }

    /// From `(prime, exponent)` pairs of machine primes, in any order.
    pub fn from_u64_pairs(pairs: &[(u64, u32)]) -> Self {
        let mut v: Vec<(u64, u32)> = pairs.iter().copied().filter(|&(_, a)| a > 0).collect();
        v.sort_unstable();
        let mut n = BigUint::one();
        let mut factors: Vec<PrimePower> = Vec::with_capacity(v.len());
        for (p, a) in v {
            n *= BigUint::from(p).pow(a);
            match factors.last_mut() {
                Some(last) if last.p == BigUint::from(p) => last.alpha += a,
                _ => factors.push(PrimePower {
                    p: BigUint::from(p),
                    alpha: a,
                    certainty: Certainty::Proven,
                }),
            }
        }
        Factorization { n, factors }
    }

    fn from_big_parts(mut parts: Vec<(BigUint, Certainty)>) -> Self {
        parts.sort_by(|x, y| x.0.cmp(&y.0));
        let mut n = BigUint::one();
        let mut factors: Vec<PrimePower> = Vec::new();
        for (p, c) in parts {
            n *= &p;
            match factors.last_mut() {
                Some(last) if last.p == p => last.alpha += 1,
                _ => factors.push(PrimePower {
                    p,
                    alpha: 1,
                    certainty: c,
                }),
            }
        }
        Factorization { n, factors }
    }

    /// Pairs as machine integers when every prime fits.
    pub fn to_u64_pairs(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|f| f.p.to_u64().map(|p| (p, f.alpha)))
            .collect()
    }

    pub fn all_proven(&self) -> bool {
        self.factors.iter().all(|f| f.certainty == Certainty::Proven)
    }

    /// Checks the product, ordering and exponent invariants.
    pub fn is_consistent(&self) -> bool {
        let mut prod = BigUint::one();
        for w in self.factors.windows(2) {
            if w[0].p >= w[1].p {
                return false;
            }
        }
        for f in &self.factors {
            if f.alpha == 0 {
                return false;
            }
            prod *= f.p.pow(f.alpha);
        }
        prod == self.n
    }
}

/// Smallest-prime-factor table for `2 <= m <= limit`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn spf(&self, m: u64) -> u64 {
        assert!((2..=self.limit).contains(&m), "{m} outside table");
        self.spf[m as usize] as u64
    }

    /// Factorization of `m <= limit` by repeated lookup.
    pub fn factor(&self, mut m: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf(m);
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            out.push((p, a));
        }
        out
    }
}

/// Linear sieve of smallest prime factors.
pub fn build_spf(limit: u64, cap: u64) -> Result<SpfTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("spf limit {limit} must be at least 2")));
    }
    if limit > cap || limit > u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "spf table up to {limit} exceeds the configured cap {cap}"
        )));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(SpfTable { limit, spf })
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Brent's variant of Pollard rho on a composite odd `n`.
fn rho_u64(n: u64, rng: &mut ChaCha8Rng, budget: u64) -> Option<u64> {
    let mut spent = 0u64;
    loop {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
}

fn rho_big(n: &BigUint, rng: &mut ChaCha8Rng, budget: u64) -> Option<BigUint> {
    let one = BigUint::one();
    let mut spent = 0u64;
    let bits = n.bits();
    let rand_below = |rng: &mut ChaCha8Rng| -> BigUint {
        let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
        BigUint::from_slice(&words) % n
    };
    loop {
        let c = rand_below(rng) + &one;
        let mut y = rand_below(rng);
        let m = 128u64;
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let f = |v: &BigUint| (v * v + &c) % n;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return None;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
}

const TRIAL_LIMIT: u64 = 1 << 12;

/// Factorization of a machine integer; never fails.
pub fn factor_u64(n: u64, seed: u64) -> Vec<(u64, u32)> {
    let mut parts: Vec<u64> = Vec::new();
    let mut m = n;
    for p in primes_up_to(TRIAL_LIMIT) {
        if p * p > m {
            break;
        }
        while m % p == 0 {
            parts.push(p);
            m /= p;
        }
    }
    if m > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stack = vec![m];
        while let Some(x) = stack.pop() {
            if x == 1 {
                continue;
            }
            if is_prime_u64(x) {
                parts.push(x);
                continue;
            }
            if let Some(r) = (2..64u32).find_map(|k| exact_root_u64(x, k).map(|r| (r, k))) {
                for _ in 0..r.1 {
                    stack.push(r.0);
                }
                continue;
            }
            let d = rho_u64(x, &mut rng, u64::MAX).expect("unbounded rho terminates");
            stack.push(d);
            stack.push(x / d);
        }
    }
    parts.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in parts {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn exact_root_u64(x: u64, k: u32) -> Option<u64> {
    let r = (x as f64).powf(1.0 / k as f64).round() as u64;
    if r < 2 {
        return None;
    }
    (r.saturating_sub(1)..=r + 1).find(|&c| c >= 2 && c.checked_pow(k) == Some(x))
}

/// Complete factorization of `n >= 1`.
///
/// Uses `table` when `n` is within it, trial division and a seeded rho
/// otherwise. A composite cofactor that survives `budget` rho iterations is
/// reported as a partial factorization.
pub fn factorize(n: &BigUint, table: Option<&SpfTable>, budget: u64, seed: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if let Some(v) = n.to_u64() {
        if let Some(t) = table {
            if v >= 2 && v <= t.limit() {
                return Ok(Factorization::from_u64_pairs(&t.factor(v)));
            }
        }
        if v == 1 {
            return Ok(Factorization::one());
        }
        return Ok(Factorization::from_u64_pairs(&factor_u64(v, seed)));
    }
    let mut parts: Vec<(BigUint, Certainty)> = Vec::new();
    let mut m = n.clone();
    for p in primes_up_to(TRIAL_LIMIT) {
        while (&m % p).is_zero() {
            parts.push((BigUint::from(p), Certainty::Proven));
            m /= p;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack = vec![m];
    let mut stuck: Option<BigUint> = None;
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if let Some(v) = x.to_u64() {
            for (p, a) in factor_u64(v, seed) {
                for _ in 0..a {
                    parts.push((BigUint::from(p), Certainty::Proven));
                }
            }
            continue;
        }
        if let Some(c) = primality(&x) {
            parts.push((x, c));
            continue;
        }
        match rho_big(&x, &mut rng, budget) {
            Some(d) => {
                let other = &x / &d;
                stack.push(d);
                stack.push(other);
            }
            None => {
                stuck = Some(match stuck {
                    Some(s) => s * x,
                    None => x,
                });
            }
        }
    }
    if let Some(cofactor) = stuck {
        let found = Factorization::from_big_parts(parts);
        return Err(Error::PartialFactorization {
            n: n.clone(),
            found: found.factors.into_iter().map(|f| (f.p, f.alpha)).collect(),
            cofactor,
        });
    }
    Ok(Factorization::from_big_parts(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.to_u64_pairs().unwrap()
    }

    #[test]
    fn spf_examples() {
        let t = build_spf(100, 1 << 20).unwrap();
        assert_eq!(t.spf(9), 3);
        assert_eq!(t.spf(7), 7);
        assert_eq!(t.spf(8), 2);
        assert_eq!(t.spf(91), 7);
        assert_eq!(t.spf(30), 2);
        assert!(build_spf(1 << 21, 1 << 20).is_err());
    }

    #[test]
    fn small_factorizations() {
        let f = factorize(&BigUint::from(360u32), None, 1000, 1).unwrap();
        assert_eq!(pairs(&f), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(&BigUint::one(), None, 1000, 1).unwrap().factors.is_empty());
        assert!(factorize(&BigUint::zero(), None, 1000, 1).is_err());
        let t = build_spf(1000, 1 << 20).unwrap();
        let g = factorize(&BigUint::from(360u32), Some(&t), 1000, 1).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rho_splits_semiprimes() {
        let n = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factor_u64(n, 7), vec![(998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(factor_u64(1 << 40, 7), vec![(2, 40)]);
        assert_eq!(factor_u64(4_294_967_291 * 4_294_967_291, 7), vec![(4_294_967_291, 2)]);
        let big = BigUint::from(18446744073709551557u64) * BigUint::from(1_000_000_007u64) * 12u32;
        let f = factorize(&big, None, 1 << 22, 9).unwrap();
        assert!(f.is_consistent());
        assert_eq!(f.factors.len(), 4);
    }

    #[test]
    fn budget_exhaustion_is_partial() {
        let p = BigUint::from(18446744073709551557u64);
        let q = BigUint::from(18446744073709551533u64);
        let err = factorize(&(&p * &q), None, 4, 3).unwrap_err();
        match err {
            Error::PartialFactorization { cofactor, .. } => assert_eq!(cofactor, p * q),
            e => panic!("unexpected {e}"),
        }
    }
}

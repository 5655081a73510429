//! Primes `p` with `σ_s(p-1) > σ_s(p) < σ_s(p+1)`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{compare, Comparison, Exponent};
use crate::sigma::{factorize, is_prime_u64, sigma_s, Certainty};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeTripleWitness {
    pub s: Exponent,
    /// `⌈s⌉`.
    pub n: u64,
    /// `1 + n·2^(n+1)`; every prime above it qualifies.
    pub bound: u64,
    pub p: u64,
    pub certainty: Certainty,
    /// `σ_s(p-1)` against `σ_s(p)`.
    pub before: Comparison,
    /// `σ_s(p)` against `σ_s(p+1)`.
    pub after: Comparison,
    /// Precision at which both comparisons were settled (0 when exact).
    pub prec: u32,
}

/// `1 + n·2^(n+1)` for `n = ⌈s⌉`, or an error if it does not fit.
pub fn triple_bound(s: &Exponent) -> Result<(u64, u64)> {
    if !s.is_positive() {
        return Err(Error::Domain(format!("prime triples need s > 0, got {s}")));
    }
    let n = s
        .ceil()
        .to_u64()
        .filter(|&n| n <= 56)
        .ok_or_else(|| Error::Resource(format!("bound 1 + n·2^(n+1) overflows for s = {s}")))?;
    Ok((n, 1 + n * (1u64 << (n + 1))))
}

/// Settles `σ_s(p-1) ? σ_s(p)` and `σ_s(p) ? σ_s(p+1)` directly.
pub fn compare_triple(s: &Exponent, p: u64, ladder: &[u32]) -> Result<(Comparison, Comparison, u32)> {
    let f = |m: u64| factorize(&BigUint::from(m), None, 1 << 24, 1);
    let (fl, fm, fr) = (f(p - 1)?, f(p)?, f(p + 1)?);
    let mut last = (Comparison::Undecided(0), Comparison::Undecided(0), 0);
    for &prec in ladder {
        let (l, m, r) = (sigma_s(&fl, s, prec)?, sigma_s(&fm, s, prec)?, sigma_s(&fr, s, prec)?);
        let (before, after) = (compare(&l, &m), compare(&m, &r));
        let exact = l.is_exact() && m.is_exact() && r.is_exact();
        last = (before, after, if exact { 0 } else { prec });
        if before.ordering().is_some() && after.ordering().is_some() {
            break;
        }
    }
    Ok(last)
}

/// The first `count` primes above the bound, each re-verified by evaluating
/// all three divisor sums.
pub fn prime_triple_witness(
    s: &Exponent,
    count: usize,
    budget: u64,
    ladder: &[u32],
) -> Result<Vec<PrimeTripleWitness>> {
    let (n, bound) = triple_bound(s)?;
    let mut out = Vec::with_capacity(count);
    let mut p = bound + 1;
    let mut tried = 0u64;
    while out.len() < count {
        if tried >= budget {
            return Err(Error::Budget(format!(
                "found {} of {count} triples among {budget} candidates",
                out.len()
            )));
        }
        tried += 1;
        if is_prime_u64(p) {
            let (before, after, prec) = compare_triple(s, p, ladder)?;
            if before != Comparison::Greater || after != Comparison::Less {
                return Err(Error::Verification(format!(
                    "p = {p} above the bound failed: {before:?}, {after:?}"
                )));
            }
            out.push(PrimeTripleWitness {
                s: s.clone(),
                n,
                bound,
                p,
                certainty: Certainty::Proven,
                before,
                after,
                prec,
            });
        }
        p += 1;
    }
    Ok(out)
}

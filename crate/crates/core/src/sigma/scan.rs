//! Segmented factorization of progression members `a·n + b`.
//!
//! Only the members themselves are sieved: for each prime `p` the members
//! divisible by `p` form a residue class of `n` modulo `p`, found once per
//! prime. After all primes up to `sqrt(a·n_hi + b)` are divided out, what
//! remains of each member is 1 or a single prime.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factor::Factorization;
use super::functions::sigma_s;
use super::primes::{inv_mod_u64, primes_up_to};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::numerics::{Exponent, ScalarValue};

/// The progression `n ↦ a·n + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProgressionSpec {
    pub a: u64,
    pub b: u64,
}

impl ProgressionSpec {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::Domain("progression step a must be positive".into()));
        }
        Ok(ProgressionSpec { a, b })
    }

    pub fn value(&self, n: u64) -> Option<u64> {
        self.a.checked_mul(n)?.checked_add(self.b)
    }
}

/// Per-member slot count: a `u64` has at most 15 distinct prime factors.
const SLOTS: usize = 16;

/// How a sieving prime meets the progression.
#[derive(Debug, Clone, Copy)]
enum Hit {
    /// Members with `n ≡ r (mod p)` are divisible by `p`.
    Residue(u32),
    /// `p | a` and `p | b`: every member is divisible.
    All,
    /// `p | a`, `p ∤ b`: no member is divisible.
    Never,
}

/// Sieving state for one progression up to a maximal index.
#[derive(Debug, Clone)]
pub struct ProgressionSieve {
    spec: ProgressionSpec,
    n_hi: u64,
    primes: Vec<u32>,
    hits: Vec<Hit>,
}

impl ProgressionSieve {
    pub fn new(spec: ProgressionSpec, n_hi: u64, sieve_cap: u64) -> Result<Self> {
        let max = spec.value(n_hi).ok_or_else(|| {
            Error::Resource(format!(
                "{}·{n_hi}+{} overflows 64 bits; split the range below n = {}",
                spec.a,
                spec.b,
                (u64::MAX - spec.b) / spec.a
            ))
        })?;
        let root = max.isqrt();
        if root > sieve_cap {
            let feasible = (sieve_cap.saturating_mul(sieve_cap).saturating_sub(spec.b)) / spec.a;
            return Err(Error::Resource(format!(
                "sieving {}n+{} up to n = {n_hi} needs primes to {root}, above the cap {sieve_cap}; \
                 the largest feasible range ends at n = {feasible}",
                spec.a, spec.b
            )));
        }
        let primes: Vec<u32> = primes_up_to(root).into_iter().map(|p| p as u32).collect();
        let hits = primes
            .iter()
            .map(|&p| {
                let p = p as u64;
                if spec.a % p == 0 {
                    if spec.b % p == 0 {
                        Hit::All
                    } else {
                        Hit::Never
                    }
                } else {
                    let inv = inv_mod_u64(spec.a % p, p).expect("p prime, p ∤ a");
                    let neg_b = (p - spec.b % p) % p;
                    Hit::Residue(((neg_b as u128 * inv as u128) % p as u128) as u32)
                }
            })
            .collect();
        Ok(ProgressionSieve {
            spec,
            n_hi,
            primes,
            hits,
        })
    }

    pub fn spec(&self) -> ProgressionSpec {
        self.spec
    }

    /// Factors the members for `n` in `[n0, n0 + len)`; `n0 >= 1`.
    pub fn segment(&self, n0: u64, len: usize) -> SievedSegment {
        assert!(n0 >= 1, "progressions start at n = 1");
        assert!(n0 + len as u64 - 1 <= self.n_hi, "segment beyond sieve range");
        let mut seg = SievedSegment {
            n0,
            values: (0..len as u64).map(|i| self.spec.a * (n0 + i) + self.spec.b).collect(),
            primes: vec![0; len * SLOTS],
            exps: vec![0; len * SLOTS],
            counts: vec![0; len],
            cofactor: Vec::new(),
        };
        let mut rem = seg.values.clone();
        for (&p, hit) in self.primes.iter().zip(&self.hits) {
            let p64 = p as u64;
            let start = match *hit {
                Hit::Never => continue,
                Hit::All => 0,
                Hit::Residue(r) => ((r as u64 + p64 - n0 % p64) % p64) as usize,
            };
            let step = if matches!(hit, Hit::All) { 1 } else { p as usize };
            let mut i = start;
            while i < len {
                let mut e = 0u8;
                let mut x = rem[i];
                while x % p64 == 0 {
                    x /= p64;
                    e += 1;
                }
                rem[i] = x;
                if e > 0 {
                    let c = seg.counts[i] as usize;
                    seg.primes[i * SLOTS + c] = p;
                    seg.exps[i * SLOTS + c] = e;
                    seg.counts[i] += 1;
                }
                i += step;
            }
        }
        seg.cofactor = rem;
        seg
    }
}

/// Factored members of one segment.
#[derive(Debug, Clone)]
pub struct SievedSegment {
    n0: u64,
    values: Vec<u64>,
    primes: Vec<u32>,
    exps: Vec<u8>,
    counts: Vec<u8>,
    cofactor: Vec<u64>,
}

impl SievedSegment {
    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> u64 {
        self.values[i]
    }

    /// Writes the factorization of member `i` into `buf`, primes increasing.
    #[inline]
    pub fn factors_into(&self, i: usize, buf: &mut Vec<(u64, u32)>) {
        buf.clear();
        let c = self.counts[i] as usize;
        for k in 0..c {
            buf.push((self.primes[i * SLOTS + k] as u64, self.exps[i * SLOTS + k] as u32));
        }
        if self.cofactor[i] > 1 {
            buf.push((self.cofactor[i], 1));
        }
    }
}

/// Runs `f` over consecutive segments of `[1, limit]`, in parallel batches,
/// returning outputs in segment order up to and including the first output
/// for which `stop` holds. The result does not depend on the thread count.
pub(crate) fn run_segments<T, F, S>(
    n_lo: u64,
    n_hi: u64,
    cfg: &RunConfig,
    f: F,
    stop: S,
) -> Vec<T>
where
    T: Send,
    F: Fn(u64, usize) -> T + Sync,
    S: Fn(&T) -> bool + Sync,
{
    let seg = cfg.segment_size.max(1) as u64;
    let starts: Vec<u64> = (n_lo..=n_hi).step_by(seg as usize).collect();
    let batch = (cfg.parallelism.max(1) * 2).max(1);
    let mut out = Vec::with_capacity(starts.len());
    cfg.install(|| {
        for chunk in starts.chunks(batch) {
            let results: Vec<T> = if cfg.parallelism > 1 {
                chunk
                    .par_iter()
                    .map(|&s| f(s, ((n_hi - s + 1).min(seg)) as usize))
                    .collect()
            } else {
                chunk.iter().map(|&s| f(s, ((n_hi - s + 1).min(seg)) as usize)).collect()
            };
            for r in results {
                let done = stop(&r);
                out.push(r);
                if done {
                    return;
                }
            }
        }
    });
    out
}

/// Receives `(n, σ_s(a·n + b))` in increasing `n`.
pub trait TermSink {
    fn accept(&mut self, n: u64, value: &ScalarValue) -> Result<()>;
}

impl<F: FnMut(u64, &ScalarValue) -> Result<()>> TermSink for F {
    fn accept(&mut self, n: u64, value: &ScalarValue) -> Result<()> {
        self(n, value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub a: u64,
    pub b: u64,
    pub n_lo: u64,
    pub n_hi: u64,
    pub terms: u64,
    pub exact_terms: u64,
    pub segments: u64,
}

/// Streams `σ_s(a·n + b)` for `n` in `[n_lo, n_hi]` into `sink`.
pub fn scan_progression(
    spec: ProgressionSpec,
    n_lo: u64,
    n_hi: u64,
    s: &Exponent,
    cfg: &RunConfig,
    sink: &mut dyn TermSink,
) -> Result<ScanSummary> {
    if n_lo == 0 {
        return Err(Error::Domain("progression scans start at n = 1".into()));
    }
    if n_lo > n_hi {
        return Err(Error::Domain(format!("empty range [{n_lo}, {n_hi}]")));
    }
    let sieve = ProgressionSieve::new(spec, n_hi, cfg.spf_cap)?;
    let mut summary = ScanSummary {
        a: spec.a,
        b: spec.b,
        n_lo,
        n_hi,
        terms: 0,
        exact_terms: 0,
        segments: 0,
    };
    let seg = cfg.segment_size.max(1) as u64;
    let mut start = n_lo;
    // Values are computed a batch of segments at a time so memory stays
    // bounded while the sink still sees terms in order.
    while start <= n_hi {
        let end = n_hi.min(start.saturating_add(seg * cfg.parallelism.max(1) as u64 * 2 - 1));
        let values = run_segments(
            start,
            end,
            cfg,
            |n0, len| -> Result<Vec<ScalarValue>> {
                let segm = sieve.segment(n0, len);
                let mut buf = Vec::with_capacity(SLOTS);
                (0..len)
                    .map(|i| {
                        segm.factors_into(i, &mut buf);
                        sigma_s(&Factorization::from_u64_pairs(&buf), s, cfg.precision)
                    })
                    .collect()
            },
            |r| r.is_err(),
        );
        let mut n = start;
        for block in values {
            summary.segments += 1;
            for v in block? {
                if v.is_exact() {
                    summary.exact_terms += 1;
                }
                sink.accept(n, &v)?;
                summary.terms += 1;
                n += 1;
            }
        }
        start = end + 1;
    }
    Ok(summary)
}

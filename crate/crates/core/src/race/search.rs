//! Crossing searches, constancy scans and race statistics.
//!
//! Every driver walks `n` in segments, possibly in parallel, and merges
//! segment outputs in index order, so results never depend on scheduling.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::kernel::{Decision, Kernel};
use super::spec::RaceSpec;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::numerics::interval::Interval;
use crate::numerics::{Ball, Dyadic, ExponentKind, ScalarValue};
use crate::sigma::scan::run_segments;
use crate::sigma::{factor_u64, sigma_nonneg_int, Factorization, ProgressionSieve};

/// Harmonic sums are kept as exact rationals up to this limit.
pub const EXACT_HARMONIC_LIMIT: u64 = 2000;

/// Sign of `σ_s(an+b) - σ_s(cn+d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">")]
    Gt,
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Lt,
            Ordering::Equal => Sign::Eq,
            Ordering::Greater => Sign::Gt,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Lt => "<",
            Sign::Eq => "=",
            Sign::Gt => ">",
        })
    }
}

/// Both sides of a race sieved up to a common limit.
pub(crate) struct Scanner {
    left: ProgressionSieve,
    right: ProgressionSieve,
    kernel: Kernel,
}

impl Scanner {
    pub(crate) fn new(spec: &RaceSpec, n_hi: u64, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Scanner {
            left: ProgressionSieve::new(spec.left(), n_hi, cfg.spf_cap)?,
            right: ProgressionSieve::new(spec.right(), n_hi, cfg.spf_cap)?,
            kernel: Kernel::new(&spec.s, cfg.precision_ladder()),
        })
    }

    /// Decides every `n` in `[n0, n0 + len)` in order; `visit` returns
    /// `true` to stop early.
    pub(crate) fn segment<F>(&self, n0: u64, len: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(u64, &Values<'_>, Decision) -> Result<bool>,
    {
        let ls = self.left.segment(n0, len);
        let rs = self.right.segment(n0, len);
        let (mut lf, mut rf) = (Vec::with_capacity(16), Vec::with_capacity(16));
        for i in 0..len {
            ls.factors_into(i, &mut lf);
            rs.factors_into(i, &mut rf);
            let n = n0 + i as u64;
            let (lv, rv) = (ls.value(i), rs.value(i));
            let d = self.kernel.decide(n, lv, &lf, rv, &rf)?;
            let vals = Values {
                lv,
                rv,
                lf: &lf,
                rf: &rf,
            };
            if visit(n, &vals, d)? {
                break;
            }
        }
        Ok(())
    }
}

/// The two progression members at one `n` with their factorizations.
pub(crate) struct Values<'a> {
    pub lv: u64,
    pub rv: u64,
    pub lf: &'a [(u64, u32)],
    pub rf: &'a [(u64, u32)],
}

fn check_limit(limit: u64) -> Result<()> {
    if limit == 0 {
        return Err(Error::Domain("limit must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingResult {
    pub n: u64,
    pub left: ScalarValue,
    pub right: ScalarValue,
    /// Largest precision any comparison up to `n` needed; 0 when all were exact.
    pub precision_used: u32,
    /// Comparisons that could not be decided. Always empty: an undecided
    /// comparison aborts the search instead.
    pub undecided_skips: Vec<u64>,
    /// Values of `n` before the crossing where both sides were equal.
    pub equal_count: u64,
}

#[derive(Default)]
struct CrossingSeg {
    hit: Option<(u64, u64, u64, u32)>,
    eq: u64,
    bits: u32,
    err: Option<Error>,
}

/// Smallest `n <= limit` with the strict `spec.direction` inequality.
pub fn first_crossing(spec: &RaceSpec, limit: u64, cfg: &RunConfig) -> Result<Option<CrossingResult>> {
    check_limit(limit)?;
    let scanner = Scanner::new(spec, limit, cfg)?;
    let want = spec.direction.ordering();
    let segs = run_segments(
        1,
        limit,
        cfg,
        |n0, len| {
            let mut out = CrossingSeg::default();
            let r = scanner.segment(n0, len, |n, v, d| {
                out.bits = out.bits.max(d.bits);
                if d.ord == want {
                    out.hit = Some((n, v.lv, v.rv, d.bits));
                    return Ok(true);
                }
                if d.ord == Ordering::Equal {
                    out.eq += 1;
                }
                Ok(false)
            });
            out.err = r.err();
            out
        },
        |o| o.hit.is_some() || o.err.is_some(),
    );
    let (mut eq, mut bits) = (0, 0);
    for seg in segs {
        if let Some(e) = seg.err {
            return Err(e);
        }
        bits = bits.max(seg.bits);
        if let Some((n, lv, rv, dbits)) = seg.hit {
            let (left, right) =
                scanner
                    .kernel
                    .values(&factor_u64(lv, cfg.seed), &factor_u64(rv, cfg.seed), dbits)?;
            return Ok(Some(CrossingResult {
                n,
                left,
                right,
                precision_used: bits,
                undecided_skips: Vec::new(),
                equal_count: eq + seg.eq,
            }));
        }
        eq += seg.eq;
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstancyReport {
    pub limit: u64,
    pub holds: bool,
    pub first_violation: Option<u64>,
    /// Sign found at the first violation.
    pub violation_sign: Option<Sign>,
    /// Number of `n` certified before stopping.
    pub checked: u64,
    pub precision_used: u32,
}

#[derive(Default)]
struct ConstancySeg {
    violation: Option<(u64, Sign)>,
    checked: u64,
    bits: u32,
    err: Option<Error>,
}

/// Certifies the strict `spec.direction` inequality for every `n <= limit`,
/// or reports the first `n` where it fails (equality counts as failure).
pub fn scan_constancy(spec: &RaceSpec, limit: u64, cfg: &RunConfig) -> Result<ConstancyReport> {
    check_limit(limit)?;
    let scanner = Scanner::new(spec, limit, cfg)?;
    let want = spec.direction.ordering();
    let segs = run_segments(
        1,
        limit,
        cfg,
        |n0, len| {
            let mut out = ConstancySeg::default();
            let r = scanner.segment(n0, len, |n, _, d| {
                out.checked += 1;
                out.bits = out.bits.max(d.bits);
                if d.ord != want {
                    out.violation = Some((n, d.ord.into()));
                    return Ok(true);
                }
                Ok(false)
            });
            out.err = r.err();
            out
        },
        |o| o.violation.is_some() || o.err.is_some(),
    );
    let mut report = ConstancyReport {
        limit,
        holds: true,
        first_violation: None,
        violation_sign: None,
        checked: 0,
        precision_used: 0,
    };
    for seg in segs {
        if let Some(e) = seg.err {
            return Err(e);
        }
        report.checked += seg.checked;
        report.precision_used = report.precision_used.max(seg.bits);
        if let Some((n, sign)) = seg.violation {
            report.holds = false;
            report.first_violation = Some(n);
            report.violation_sign = Some(sign);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct RaceStats {
    pub limit: u64,
    pub count_lt: u64,
    pub count_eq: u64,
    pub count_gt: u64,
    /// `Σ σ_s(an+b)` over `n <= limit`, for integer `s >= 0` only.
    #[serde(serialize_with = "opt_big")]
    pub sum_left: Option<BigUint>,
    #[serde(serialize_with = "opt_big")]
    pub sum_right: Option<BigUint>,
    /// `Σ 1/n` over `n` with left < right.
    pub harm_lt: ScalarValue,
    /// `Σ 1/n` over `n` with left > right.
    pub harm_gt: ScalarValue,
    pub precision_used: u32,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

struct StatsSeg {
    counts: [u64; 3],
    sums: [BigUint; 2],
    exact_lt: Vec<u64>,
    exact_gt: Vec<u64>,
    harm: [Interval; 2],
    bits: u32,
    err: Option<Error>,
}

fn interval_ball(i: Interval) -> ScalarValue {
    let lo = Dyadic::from_f64(i.lo).expect("finite");
    let hi = Dyadic::from_f64(i.hi).expect("finite");
    ScalarValue::Ball(Ball::from_bounds(lo, hi, 53))
}

fn exact_harmonic(ns: &[u64]) -> ScalarValue {
    let sum = ns.iter().fold(BigRational::zero(), |acc, &n| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(n))
    });
    ScalarValue::Exact(sum)
}

/// Sign tallies, partial sums and harmonic weights over `n <= limit`.
pub fn race_stats(spec: &RaceSpec, limit: u64, cfg: &RunConfig) -> Result<RaceStats> {
    check_limit(limit)?;
    let scanner = Scanner::new(spec, limit, cfg)?;
    let k = match spec.s.kind() {
        ExponentKind::Integer(k) if *k >= 0 => Some(*k as u32),
        _ => None,
    };
    let exact = limit <= EXACT_HARMONIC_LIMIT;
    let zero = Interval { lo: 0.0, hi: 0.0 };
    let segs = run_segments(
        1,
        limit,
        cfg,
        |n0, len| {
            let mut out = StatsSeg {
                counts: [0; 3],
                sums: [BigUint::zero(), BigUint::zero()],
                exact_lt: Vec::new(),
                exact_gt: Vec::new(),
                harm: [zero, zero],
                bits: 0,
                err: None,
            };
            let r = scanner.segment(n0, len, |n, v, d| {
                out.bits = out.bits.max(d.bits);
                if let Some(k) = k {
                    out.sums[0] += sigma_nonneg_int(&Factorization::from_u64_pairs(v.lf), k);
                    out.sums[1] += sigma_nonneg_int(&Factorization::from_u64_pairs(v.rf), k);
                }
                let w = Interval::from_u64(n).expect("n below 2^53").recip();
                match d.ord {
                    Ordering::Less => {
                        out.counts[0] += 1;
                        out.harm[0] = out.harm[0].add(w);
                        if exact {
                            out.exact_lt.push(n);
                        }
                    }
                    Ordering::Equal => out.counts[1] += 1,
                    Ordering::Greater => {
                        out.counts[2] += 1;
                        out.harm[1] = out.harm[1].add(w);
                        if exact {
                            out.exact_gt.push(n);
                        }
                    }
                }
                Ok(false)
            });
            out.err = r.err();
            out
        },
        |o| o.err.is_some(),
    );
    let mut counts = [0u64; 3];
    let mut sums = [BigUint::zero(), BigUint::zero()];
    let (mut lt, mut gt) = (Vec::new(), Vec::new());
    let mut harm = [zero, zero];
    let mut bits = 0;
    for seg in segs {
        if let Some(e) = seg.err {
            return Err(e);
        }
        for i in 0..3 {
            counts[i] += seg.counts[i];
        }
        let [l, r] = seg.sums;
        sums[0] += l;
        sums[1] += r;
        lt.extend(seg.exact_lt);
        gt.extend(seg.exact_gt);
        harm[0] = harm[0].add(seg.harm[0]);
        harm[1] = harm[1].add(seg.harm[1]);
        bits = bits.max(seg.bits);
    }
    let [sum_left, sum_right] = sums;
    let (harm_lt, harm_gt) = if exact {
        (exact_harmonic(&lt), exact_harmonic(&gt))
    } else {
        (interval_ball(harm[0]), interval_ball(harm[1]))
    };
    Ok(RaceStats {
        limit,
        count_lt: counts[0],
        count_eq: counts[1],
        count_gt: counts[2],
        sum_left: k.map(|_| sum_left),
        sum_right: k.map(|_| sum_right),
        harm_lt,
        harm_gt,
        precision_used: bits,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RaceRow {
    pub n: u64,
    pub left: ScalarValue,
    pub right: ScalarValue,
    pub sign: Sign,
}

/// Certified rows for `n` in `[n_lo, n_hi]`, with values at the precision
/// each comparison needed.
pub fn race_rows(spec: &RaceSpec, n_lo: u64, n_hi: u64, cfg: &RunConfig) -> Result<Vec<RaceRow>> {
    if n_lo == 0 || n_lo > n_hi {
        return Err(Error::Domain(format!("bad row range [{n_lo}, {n_hi}]")));
    }
    let scanner = Scanner::new(spec, n_hi, cfg)?;
    let segs = run_segments(
        n_lo,
        n_hi,
        cfg,
        |n0, len| -> Result<Vec<RaceRow>> {
            let mut rows = Vec::with_capacity(len);
            scanner.segment(n0, len, |n, v, d| {
                let (left, right) = scanner.kernel.values(v.lf, v.rf, d.bits)?;
                rows.push(RaceRow {
                    n,
                    left,
                    right,
                    sign: d.ord.into(),
                });
                Ok(false)
            })?;
            Ok(rows)
        },
        |r| r.is_err(),
    );
    let mut out = Vec::new();
    for seg in segs {
        out.extend(seg?);
    }
    Ok(out)
}

//! Independent oracles shared by the integration tests: naive divisor
//! enumeration, trial division and plain rational arithmetic.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sigma_race::numerics::{compare, zeta_enclosure, Comparison, Exponent, ScalarValue};
use sigma_race::sigma::{sigma_reflect_check, sigma_restricted, sigma_s, Factorization};

pub const PREC: u32 = 128;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn exp(s: &str) -> Exponent {
    s.parse().unwrap()
}

/// Divisors by trial division up to `√n`.
pub fn naive_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization by trial division.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn fac(n: u64) -> Factorization {
    Factorization::from_u64_pairs(&trial_factor(n))
}

/// `Σ_{d | n} d^k` for an integer `k`, as an exact rational.
pub fn naive_sigma(n: u64, k: i64) -> BigRational {
    naive_divisors(n).into_iter().fold(BigRational::zero(), |acc, d| {
        let p = BigRational::from_integer(BigInt::from(d).pow(k.unsigned_abs() as u32));
        acc + if k < 0 { p.recip() } else { p }
    })
}

/// `Σ_{d | n} d^s` in floating point, for sanity checks with a margin.
pub fn float_sigma(n: u64, s: f64) -> f64 {
    naive_divisors(n).into_iter().map(|d| (d as f64).powf(s)).sum()
}

pub fn omega_counts(n: u64) -> (u32, u32) {
    let f = trial_factor(n);
    (f.len() as u32, f.iter().map(|&(_, e)| e).sum())
}

pub fn overlaps(x: &ScalarValue, y: &ScalarValue) -> bool {
    let (xl, xh) = x.bounds();
    let (yl, yh) = y.bounds();
    xl <= yh && yl <= xh
}

/// `x >= y`, certified. Equality between balls is accepted only when the
/// caller knows the two sides are equal.
fn certified_ge(x: &ScalarValue, y: &ScalarValue, known_equal: bool) -> Result<(), String> {
    match compare(x, y) {
        Comparison::Greater | Comparison::Equal => Ok(()),
        Comparison::Undecided(_) if known_equal && overlaps(x, y) => Ok(()),
        c => Err(format!("expected >=, got {c:?}")),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn check_multiplicative(m: u64, n: u64, s: &Exponent) -> Result<(), String> {
    assert_eq!(gcd(m, n), 1);
    let mn = fac(m * n);
    let whole = sigma_s(&mn, s, PREC).map_err(|e| e.to_string())?;
    let parts = sigma_s(&fac(m), s, PREC)
        .and_then(|x| Ok(x.mul(&sigma_s(&fac(n), s, PREC)?)))
        .map_err(|e| e.to_string())?;
    if whole.is_exact() && parts.is_exact() && whole != parts {
        return Err(format!("σ_{s}({m}·{n}) != σ_{s}({m})σ_{s}({n})"));
    }
    if !overlaps(&whole, &parts) {
        return Err(format!("σ_{s}({m}·{n}) and σ_{s}({m})σ_{s}({n}) are disjoint"));
    }
    Ok(())
}

/// `σ_s(m)σ_s(n) >= σ_s(mn) >= m^s σ_s(n)` for `s >= 0`.
pub fn check_sandwich(m: u64, n: u64, s: &Exponent) -> Result<(), String> {
    let e = |r: sigma_race::Result<ScalarValue>| r.map_err(|e| e.to_string());
    let (sm, sn) = (e(sigma_s(&fac(m), s, PREC))?, e(sigma_s(&fac(n), s, PREC))?);
    let smn = e(sigma_s(&fac(m * n), s, PREC))?;
    let ms = e(sigma_race::numerics::pow_scalar(&int(m), s, PREC))?;
    let coprime = gcd(m, n) == 1;
    certified_ge(&sm.mul(&sn), &smn, coprime).map_err(|x| format!("upper, m={m} n={n} s={s}: {x}"))?;
    certified_ge(&smn, &ms.mul(&sn), m == 1).map_err(|x| format!("lower, m={m} n={n} s={s}: {x}"))?;
    if s.is_integer() {
        for (x, y) in [(sm.mul(&sn), smn.clone()), (smn, ms.mul(&sn))] {
            if matches!(compare(&x, &y), Comparison::Undecided(_)) {
                return Err(format!("undecided at integer s = {s}"));
            }
        }
    }
    Ok(())
}

/// `σ_{-r}(m) = σ_r(m)/m^r`, both library routes plus the naive sum for
/// integer `r`.
pub fn check_reflection(m: u64, r: &Exponent) -> Result<(), String> {
    let (left, right) = sigma_reflect_check(&fac(m), r, PREC).map_err(|e| e.to_string())?;
    if !overlaps(&left, &right) {
        return Err(format!("reflection fails at m = {m}, r = {r}"));
    }
    if let Some(k) = r.as_integer() {
        let truth = naive_sigma(m, -k);
        let (lo, hi) = left.bounds();
        if truth < lo || truth > hi {
            return Err(format!("σ_-{k}({m}) excludes the naive sum"));
        }
    }
    Ok(())
}

/// `Σ_a σ_s(n, q, a) = σ_s(n)`.
pub fn check_residue_sum(n: u64, q: u64, s: &Exponent) -> Result<(), String> {
    let f = fac(n);
    let mut acc = ScalarValue::from_int(0);
    for a in 0..q {
        let part = sigma_restricted(&f, q, a, s, PREC, 1 << 20).map_err(|e| e.to_string())?;
        acc = acc.add(&part);
    }
    let whole = sigma_s(&f, s, PREC).map_err(|e| e.to_string())?;
    let ok = if acc.is_exact() && whole.is_exact() {
        acc == whole
    } else {
        overlaps(&acc, &whole)
    };
    if !ok {
        return Err(format!("residue sum fails at n = {n}, q = {q}, s = {s}"));
    }
    Ok(())
}

/// `π²/6` lies strictly inside this interval.
pub fn pi2_over_6() -> (BigRational, BigRational) {
    let scale = BigInt::from(10u64).pow(20);
    let lo = BigInt::parse_bytes(b"164493406684822643647", 10).unwrap();
    (
        BigRational::new(lo.clone(), scale.clone()),
        BigRational::new(lo + 1, scale),
    )
}

pub fn check_zeta2() -> Result<(), String> {
    let (plo, phi) = pi2_over_6();
    for k in [10, 20, 30] {
        let target = BigRational::new(BigInt::one(), BigInt::one() << k);
        let e = zeta_enclosure(&Exponent::integer(2), &target, 10_000_000).map_err(|e| e.to_string())?;
        if e.lo > plo || e.hi < phi {
            return Err(format!("ζ(2) enclosure at width 2^-{k} misses π²/6"));
        }
    }
    Ok(())
}

pub fn check_zeta_cap() -> Result<(), String> {
    for s in ["3/2", "2", "3", "16"] {
        let s = exp(s);
        let e = zeta_enclosure(&s, &rat(1, 1 << 20), 10_000_000).map_err(|e| e.to_string())?;
        let cap = s.value() / (s.value() - BigRational::one());
        if e.hi > cap || e.lo > e.hi {
            return Err(format!("ζ({s}).hi exceeds s/(s-1)"));
        }
    }
    Ok(())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coprime_pair(rng: &mut ChaCha8Rng, max: u64) -> (u64, u64) {
    loop {
        let m = rng.gen_range(1..=max);
        let n = rng.gen_range(1..=max);
        if gcd(m, n) == 1 {
            return (m, n);
        }
    }
}

/// Every invariant suite at its stated sample size, from a fixed seed.
pub fn invariant_suites(seed: u64) -> Vec<(&'static str, Result<(), String>)> {
    let mut r = rng(seed);
    let exps: Vec<Exponent> = ["-1", "0", "1/2", "1", "2"].iter().map(|s| exp(s)).collect();
    let mut out = Vec::new();

    let mut res = Ok(());
    for _ in 0..200 {
        let (m, n) = coprime_pair(&mut r, 1_000_000);
        for s in &exps {
            res = res.and_then(|_| check_multiplicative(m, n, s));
        }
    }
    out.push(("multiplicativity", res));

    let mut res = Ok(());
    for _ in 0..200 {
        let m = r.gen_range(1..=1_000_000u64);
        let n = r.gen_range(1..=1_000_000u64);
        for s in exps.iter().filter(|s| !s.is_negative()) {
            res = res.and_then(|_| check_sandwich(m, n, s));
        }
    }
    out.push(("sandwich", res));

    let mut res = Ok(());
    for _ in 0..200 {
        let m = r.gen_range(1..=1_000_000u64);
        for s in ["1/2", "1", "2", "3/4"] {
            res = res.and_then(|_| check_reflection(m, &exp(s)));
        }
    }
    out.push(("reflection", res));

    let mut res = Ok(());
    for n in 1..=1000u64 {
        for q in 2..=4 {
            for s in ["0", "1", "1/2"] {
                res = res.and_then(|_| check_residue_sum(n, q, &exp(s)));
            }
        }
    }
    out.push(("residue sums", res));
    out.push(("zeta(2) contains pi^2/6", check_zeta2()));
    out.push(("zeta(s).hi <= s/(s-1)", check_zeta_cap()));
    out
}

/// Race specs and `k` values small enough to factor every witness directly.
pub fn small_witness_params() -> Vec<(u64, u64, u64, u64, usize)> {
    let specs = [(30, 0, 30, 1), (6, 0, 6, 1), (1, 1, 1, 0), (2, 1, 3, 1), (5, 1, 2, 1)];
    specs
        .iter()
        .flat_map(|&(a, b, c, d)| (2..=6).map(move |k| (a, b, c, d, k)))
        .collect()
}

/// Checks the certificates of one witness against exact evaluation.
/// Returns how many ratio certificates were `CertifiedLess`.
pub fn check_witness_soundness(w: &sigma_race::witness::NewmanWitness) -> Result<usize, String> {
    use num_traits::ToPrimitive;
    use sigma_race::witness::{certify_omega, certify_ratio, Verdict};

    let left = (&w.n * w.a + w.b).to_u64().ok_or("left side too large")?;
    let right = (&w.n * w.c + w.d).to_u64().ok_or("right side too large")?;
    let delta = w.delta.to_u64().ok_or("δ too large")?;
    let det = (w.a as i128 * w.d as i128 - w.b as i128 * w.c as i128).unsigned_abs() as u64;
    if det % delta != 0 {
        return Err(format!("δ = {delta} does not divide {det}"));
    }
    let two_tau = 2 * naive_divisors(delta).len() as u64;
    if int(two_tau) > BigRational::from_integer(w.big_d.clone().into()) {
        return Err("2τ(δ) > D".into());
    }
    let mut certified = 0;
    for s in ["0", "1/2", "1"] {
        let c = certify_ratio(w, &exp(s), PREC).map_err(|e| e.to_string())?;
        if c.upper_left > int(two_tau) {
            return Err(format!("upper_left exceeds 2τ(δ) at s = {s}"));
        }
        if c.verdict != Verdict::CertifiedLess {
            continue;
        }
        certified += 1;
        let holds = match s {
            "0" => naive_sigma(left, 0) < naive_sigma(right, 0),
            "1" => naive_sigma(left, 1) < naive_sigma(right, 1),
            _ => {
                let (l, r) = (float_sigma(left, 0.5), float_sigma(right, 0.5));
                l < r * (1.0 - 1e-9)
            }
        };
        if !holds {
            return Err(format!("certificate at s = {s} contradicts exact evaluation for n = {}", w.n));
        }
    }
    let o = certify_omega(w).map_err(|e| e.to_string())?;
    let (wl, bl) = omega_counts(left);
    let (wr, br) = omega_counts(right);
    if wl > o.omega_upper_left || wr < o.omega_lower_right {
        return Err(format!("ω bounds violated: ω = ({wl}, {wr})"));
    }
    if bl > o.big_omega_upper_left || br < o.big_omega_lower_right {
        return Err(format!("Ω bounds violated: Ω = ({bl}, {br})"));
    }
    if (o.omega_certified && wl >= wr) || (o.big_omega_certified && bl >= br) {
        return Err("counting certificate contradicts exact ω, Ω".into());
    }
    Ok(certified)
}

//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two cells are known to disagree with the published tables; their
//! computed values are pinned below. The run exits nonzero on any other
//! failure, or if a known cell changes value.

mod common;

use std::time::Instant;

use common::{check_witness_soundness, exp, invariant_suites, small_witness_params};
use num_rational::BigRational;
use sigma_race::numerics::Exponent;
use sigma_race::params::{one_change_min_d, one_change_params, Truth};
use sigma_race::race::{first_crossing, scan_constancy, table_g, table_h, Direction, RaceSpec, Sign};
use sigma_race::witness::{
    certify_omega, certify_ratio, construct_newman_witness, martin_number, verify_document, Artifact,
    Document, Verdict,
};
use sigma_race::RunConfig;

const ZETA_CAP: u64 = 10_000_000;

const G_TABLE: [(u32, u64); 9] = [
    (2, 379),
    (3, 5839),
    (4, 95929),
    (5, 95929),
    (6, 326159),
    (7, 326159),
    (8, 2198029),
    (9, 2198029),
    (10, 7813639),
];

const H_TABLE: [(i64, u64); 15] = [
    (2, 7207),
    (3, 9115),
    (4, 9691),
    (5, 9883),
    (6, 9995),
    (7, 9981),
    (8, 9991),
    (9, 9997),
    (10, 9999),
    (11, 9999),
    (12, 9999),
    (13, 10000),
    (14, 10000),
    (15, 10000),
    (16, 10000),
];

/// `h(6)` as computed: from here on the sign alternates with the parity of n.
const H6_COMPUTED: u64 = 9955;
/// First `n` where `τ(30n+1) < τ(30n)` fails: both sides equal 16.
const TAU_30N_FIRST_TIE: u64 = 829;

struct Outcome {
    pass: bool,
    /// Failure matches a pinned, analyzed discrepancy.
    known: bool,
    detail: String,
    /// Serialized results compared across thread counts.
    fingerprint: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            known: false,
            detail: detail.into(),
            fingerprint: String::new(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Outcome::new(false, format!("error: {e}"))
    }
}

fn cfg(parallelism: usize) -> RunConfig {
    RunConfig {
        parallelism,
        ..RunConfig::default()
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

fn crossing_30n(c: &RunConfig) -> Outcome {
    let run = || -> sigma_race::Result<Outcome> {
        let spec = RaceSpec::new(30, 1, 30, 0, exp("1/2"), Direction::Gt)?;
        let r = first_crossing(&spec, 3_000_000, c)?;
        let n = r.as_ref().map(|r| r.n);
        let mut o = Outcome::new(n == Some(2_338_703), format!("first n = {n:?}, expected 2338703"));
        o.fingerprint = json(&r);
        Ok(o)
    };
    run().unwrap_or_else(Outcome::error)
}

fn g_table(c: &RunConfig) -> Outcome {
    let ks: Vec<u32> = G_TABLE.iter().map(|&(k, _)| k).collect();
    match table_g(&ks, 10_000_000, c) {
        Ok(cells) => {
            let bad: Vec<String> = cells
                .iter()
                .zip(G_TABLE)
                .filter(|(cell, (_, n))| cell.value != Some(*n))
                .map(|(cell, (k, n))| format!("g({k}) = {:?}, expected {n}", cell.value))
                .collect();
            let mut o = Outcome::new(bad.is_empty(), if bad.is_empty() { "9 cells match".into() } else { bad.join("; ") });
            o.fingerprint = json(&cells);
            o
        }
        Err(e) => Outcome::error(e),
    }
}

fn h_table(c: &RunConfig) -> Outcome {
    let ss: Vec<Exponent> = H_TABLE.iter().map(|&(s, _)| Exponent::integer(s)).collect();
    match table_h(&ss, 100_000, c) {
        Ok(cells) => {
            let bad: Vec<(i64, Option<u64>, u64)> = cells
                .iter()
                .zip(H_TABLE)
                .filter(|(cell, (_, n))| cell.value != Some(*n))
                .map(|(cell, (s, n))| (s, cell.value, n))
                .collect();
            let detail = if bad.is_empty() {
                "15 cells match".to_string()
            } else {
                bad.iter()
                    .map(|(s, got, n)| format!("h({s}) = {got:?}, expected {n}"))
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            let mut o = Outcome::new(bad.is_empty(), format!("{detail} ({} cells)", cells.len()));
            o.known = bad == [(6, Some(H6_COMPUTED), 9995)];
            o.fingerprint = json(&cells);
            o
        }
        Err(e) => Outcome::error(e),
    }
}

fn scans(c: &RunConfig) -> Outcome {
    let run = || -> sigma_race::Result<Outcome> {
        let mut bad = Vec::new();
        let mut known = true;
        let mut reports = Vec::new();
        for s in ["-1", "0", "1/2", "1"] {
            let spec = RaceSpec::new(30, 1, 30, 0, exp(s), Direction::Lt)?;
            let r = scan_constancy(&spec, 1_000_000, c)?;
            if !r.holds {
                bad.push(format!(
                    "30n+1 vs 30n at s = {s}: fails at n = {:?} ({:?})",
                    r.first_violation, r.violation_sign
                ));
                known &= s == "0"
                    && r.first_violation == Some(TAU_30N_FIRST_TIE)
                    && r.violation_sign == Some(Sign::Eq);
            }
            reports.push(r);
        }
        let spec = RaceSpec::new(2, 5, 6, 17, Exponent::integer(1), Direction::Lt)?;
        let holds = scan_constancy(&spec, 1_000_000, c)?;
        if !holds.holds {
            bad.push(format!("2n+5 vs 6n+17 at s = 1 fails at n = {:?}", holds.first_violation));
            known = false;
        }
        let flip_spec = RaceSpec::new(2, 5, 6, 17, exp("1/2"), Direction::Lt)?;
        let flip = scan_constancy(&flip_spec, 1_000_000, c)?;
        if flip.first_violation != Some(5) {
            bad.push(format!("2n+5 vs 6n+17 at s = 1/2 flips at {:?}, expected 5", flip.first_violation));
            known = false;
        }
        reports.push(holds);
        reports.push(flip);
        let mut o = Outcome::new(bad.is_empty(), if bad.is_empty() { "all scans as stated".into() } else { bad.join("; ") });
        o.known = !bad.is_empty() && known;
        o.fingerprint = json(&reports);
        Ok(o)
    };
    run().unwrap_or_else(Outcome::error)
}

fn one_change_values() -> Outcome {
    let run = || -> sigma_race::Result<Outcome> {
        let r = one_change_min_d(&Exponent::integer(2), 999_999, 5, 1, 2, Some(6_224_673), ZETA_CAP)?;
        let p = one_change_params(9999, 5, 1, 2, 1, 3, false, ZETA_CAP)?;
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let checks = [
            ("d = 6224673 validates", r.check.map(|c| c.truth) == Some(Truth::Holds)),
            ("d = 29999", p.d == 29999),
            ("x1 = 49997/49996", p.x1 == q(49997, 49996)),
            ("x2 = 50001/49999", p.x2 == q(50001, 49999)),
            ("s0 = 16", p.s0 == Exponent::integer(16)),
        ];
        let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        let mut o = Outcome::new(
            bad.is_empty(),
            if bad.is_empty() { "validation and part-two values match".into() } else { format!("mismatch: {}", bad.join(", ")) },
        );
        o.fingerprint = format!("{}{}", json(&r), json(&p));
        Ok(o)
    };
    run().unwrap_or_else(Outcome::error)
}

fn martin() -> Outcome {
    let m = martin_number();
    Outcome::new(
        m.digit_count == 1116 && m.z_mod_30 == 1,
        format!("{} digits, z mod 30 = {}", m.digit_count, m.z_mod_30),
    )
}

fn newman_certificate() -> Outcome {
    let run = || -> sigma_race::Result<Outcome> {
        let s = exp("1/2");
        for k in 17..=20 {
            let w = construct_newman_witness(30, 0, 30, 1, k, 1_000_000)?;
            let c = certify_ratio(&w, &s, 128)?;
            if c.verdict != Verdict::CertifiedLess {
                continue;
            }
            let (first, last) = (w.primes[0], *w.primes.last().unwrap());
            let omega = certify_omega(&w)?;
            let text = Document::new(Artifact::Newman { witness: w.clone(), certificate: Some(c), omega }).to_json()?;
            let report = verify_document(&Document::from_json(&text)?, &cfg(1).precision_ladder())?;
            let ok = first == 7 && last >= 59 && report.verdict == Some(Verdict::CertifiedLess);
            return Ok(Outcome::new(
                ok,
                format!("k = {k}, primes {first}..{last}, n has {} digits, verify: {:?}", w.n.to_string().len(), report.verdict),
            ));
        }
        Ok(Outcome::new(false, "no certified witness for k in 17..=20"))
    };
    run().unwrap_or_else(Outcome::error)
}

fn soundness() -> Outcome {
    let mut certified = 0;
    let mut count = 0;
    for (a, b, c, d, k) in small_witness_params() {
        let w = match construct_newman_witness(a, b, c, d, k, 1_000_000) {
            Ok(w) => w,
            Err(e) => return Outcome::error(format!("({a},{b},{c},{d}) k = {k}: {e}")),
        };
        match check_witness_soundness(&w) {
            Ok(n) => certified += n,
            Err(e) => return Outcome::new(false, format!("({a},{b},{c},{d}) k = {k}: {e}")),
        }
        count += 1;
    }
    Outcome::new(count == 25, format!("{count} witnesses, {certified} certified verdicts, none contradicted"))
}

fn invariants() -> Outcome {
    let results = invariant_suites(0x1a7e);
    let bad: Vec<String> = results
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    let names: Vec<&str> = results.iter().map(|r| r.0).collect();
    Outcome::new(bad.is_empty(), if bad.is_empty() { names.join(", ") } else { bad.join("; ") })
}

fn main() {
    let mut lines: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let mut o = f();
        o.detail = format!("{} [{:.1}s]", o.detail, t.elapsed().as_secs_f64());
        lines.push((id, name, o));
    };
    let serial = cfg(1);
    let wide = cfg(8);
    let deterministic: [(&str, fn(&RunConfig) -> Outcome); 4] = [
        ("crossing 30n+1 vs 30n", crossing_30n),
        ("g-table", g_table),
        ("h-table", h_table),
        ("constancy scans", scans),
    ];
    for (i, (name, f)) in deterministic.iter().enumerate() {
        timed(i as u32 + 1, name, &|| f(&serial));
    }
    timed(5, "one-change parameters", &one_change_values);
    timed(6, "explicit index digits", &martin);
    timed(7, "newman certificate", &newman_certificate);
    timed(8, "certificate soundness", &soundness);
    timed(9, "invariant suites", &invariants);

    let t = Instant::now();
    let mut diffs = Vec::new();
    for (i, (name, f)) in deterministic.iter().enumerate() {
        if f(&wide).fingerprint != lines[i].2.fingerprint {
            diffs.push(*name);
        }
    }
    // Parameter calculators are single-threaded; rerun to compare anyway.
    if one_change_values().fingerprint != lines[4].2.fingerprint {
        diffs.push("one-change parameters");
    }
    let detail = if diffs.is_empty() {
        "criteria 1-5 identical at --parallel 1 and 8".to_string()
    } else {
        format!("outputs differ: {}", diffs.join(", "))
    };
    lines.push((
        10,
        "determinism",
        Outcome::new(diffs.is_empty(), format!("{detail} [{:.1}s]", t.elapsed().as_secs_f64())),
    ));

    let mut unexpected = 0;
    for (id, name, o) in &lines {
        let tag = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {id:>2} {name}: {tag}: {}", o.detail);
    }
    let passed = lines.iter().filter(|l| l.2.pass).count();
    println!("acceptance: {passed}/{} pass, {unexpected} unexpected failures", lines.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}

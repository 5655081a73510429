mod common;

use common::*;
use num_rational::BigRational;
use proptest::prelude::*;
use sigma_race::numerics::Exponent;
use sigma_race::params::{
    always_less_check, dominance_s0, eventual_dominance, one_change_min_d, one_change_params,
    ratio_range, ratio_trend, DominanceCriterion, Truth,
};
use sigma_race::race::{race_rows, scan_constancy, Direction, RaceSpec, Sign};
use sigma_race::RunConfig;

const CAP: u64 = 10_000_000;

fn exponents_from(s0: &Exponent) -> [Exponent; 2] {
    let k = s0.as_integer().expect("integer threshold");
    [Exponent::integer(k), Exponent::integer(k + 1)]
}

/// Every `n` in `[n_from, 10^4]` satisfies the claimed direction.
fn claim_holds(c: &DominanceCriterion) -> Result<(), String> {
    let cfg = RunConfig::default();
    for s in exponents_from(&c.s0) {
        let spec = RaceSpec::new(c.a, c.b, c.c, c.d, s.clone(), c.claim).unwrap();
        if c.n_from == 1 {
            let r = scan_constancy(&spec, 10_000, &cfg).unwrap();
            if !r.holds {
                return Err(format!("{:?} fails at n = {:?}, s = {s}", c.claim, r.first_violation));
            }
        } else {
            let want = Sign::from(c.claim.ordering());
            for row in race_rows(&spec, c.n_from, 10_000, &cfg).unwrap() {
                if row.sign != want {
                    return Err(format!("{:?} fails at n = {}, s = {s}", c.claim, row.n));
                }
            }
        }
    }
    Ok(())
}

fn fired_clauses_survive(c: &DominanceCriterion) {
    for round in 1..3 {
        let truths = c.recheck(round, CAP).unwrap();
        for (eval, t) in c.clauses.iter().zip(truths) {
            if c.fired.contains(&eval.clause) {
                assert_ne!(t, Truth::Fails, "{} flipped at round {round}", eval.text);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ratio_is_monotone(a in 1u64..50, b in 0u64..50, c in 1u64..50, d in 0u64..50) {
        prop_assume!(a * d != b * c);
        let f = |n: u64| rat((a * n + b) as i64, (c * n + d) as i64);
        let limit = rat(a as i64, c as i64);
        let trend = ratio_trend(a, b, c, d);
        let (inf, sup) = ratio_range(a, b, c, d);
        for n in 1..1000u64 {
            prop_assert_eq!(f(n + 1).cmp(&f(n)), trend);
            prop_assert!(f(n) >= inf && f(n) <= sup);
            prop_assert_eq!(f(n).cmp(&limit), trend.reverse());
        }
        // ad > bc pushes the ratio up toward a/c.
        prop_assert_eq!(trend, (a * d).cmp(&(b * c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn dominance_claims_hold_on_scans(a in 2u64..12, c in 1u64..8, b in 0u64..20, d in 0u64..20) {
        prop_assume!(a > c && b >= d);
        let crit = dominance_s0(a, b, c, d, false, CAP).unwrap();
        prop_assert!(crit.certified);
        prop_assert_eq!(claim_holds(&crit), Ok(()));
        fired_clauses_survive(&crit);
    }

    #[test]
    fn eventual_claims_hold_on_scans(a in 1u64..12, c in 1u64..12, b in 0u64..60, d in 0u64..60) {
        prop_assume!(a != c && a * d != b * c);
        let crit = eventual_dominance(a, b, c, d, false, CAP).unwrap();
        prop_assert!(crit.certified);
        prop_assert_eq!(claim_holds(&crit), Ok(()));
        fired_clauses_survive(&crit);
    }

    #[test]
    fn always_less_claims_hold_on_scans(a in 1u64..10, b in 0u64..10, c in 1u64..30, d in 0u64..30, s0 in 2i64..6) {
        prop_assume!(a * d > b * c);
        let crit = always_less_check(a, b, c, d, &Exponent::integer(s0), CAP).unwrap();
        if crit.certified {
            prop_assert_eq!(claim_holds(&crit), Ok(()));
            fired_clauses_survive(&crit);
        } else {
            prop_assert!(crit.fired.is_empty());
        }
    }

    #[test]
    fn min_d_is_sharp(s0 in 2i64..4, m in 0u64..200, a in 3u64..12, b in 0u64..6, c in 1u64..4) {
        let s0 = Exponent::integer(s0);
        let r = match one_change_min_d(&s0, m, a, b, c, None, CAP) {
            Ok(r) => r,
            Err(sigma_race::Error::Precondition(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assume!(r.min_d_exact && r.min_d > 0);
        let at = one_change_min_d(&s0, m, a, b, c, Some(r.min_d), CAP).unwrap();
        prop_assert_eq!(at.check.unwrap().truth, Truth::Holds);
        let below = one_change_min_d(&s0, m, a, b, c, Some(r.min_d - 1), CAP).unwrap();
        prop_assert_eq!(below.check.unwrap().truth, Truth::Fails);
        // '<' on n <= M at s0 and s0 + 1.
        if m > 0 {
            for s in exponents_from(&s0) {
                let spec = RaceSpec::new(a, b, c, r.min_d, s, Direction::Lt).unwrap();
                let rep = scan_constancy(&spec, m, &RunConfig::default()).unwrap();
                prop_assert!(rep.holds, "fails at {:?}", rep.first_violation);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn one_change_sign_pattern(m in 1u64..40, b in 1u64..4, dc in 1u64..4, q2 in 2u64..4, k in 1u64..4, extra in 0u64..3) {
        let c = b + dc;
        // a > 2c with q2 | a - c.
        let a = c + q2 * (k + (c + 1) / q2 + extra);
        prop_assume!(a > 2 * c);
        let p = one_change_params(m, a, b, c, 1, q2, false, CAP).unwrap();
        let cfg = RunConfig::default();
        for s in exponents_from(&p.s0) {
            let spec = RaceSpec::new(a, b, c, p.d, s.clone(), Direction::Lt).unwrap();
            for row in race_rows(&spec, 1, m + 100, &cfg).unwrap() {
                let want = if row.n <= m { Sign::Lt } else { Sign::Gt };
                prop_assert_eq!(row.sign, want, "n = {}, s = {}, d = {}", row.n, s, p.d);
            }
        }
        prop_assert!(p.threshold <= p.x1 && p.threshold <= p.x2 && p.threshold <= p.alpha);
        prop_assert!(p.zeta_hi < p.threshold);
    }
}

#[test]
fn large_threshold_example() {
    let p = one_change_params(9999, 5, 1, 2, 1, 3, true, CAP).unwrap();
    let real = p.s0_real.unwrap();
    assert!(real.value() < &BigRational::from_integer(16.into()));
    assert!(real.value() > &BigRational::from_integer(15.into()));
}

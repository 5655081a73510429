mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sigma_race::numerics::{compare, pow_scalar, zeta_enclosure, Comparison, Exponent, ScalarValue};
use sigma_race::sigma::sigma_s;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop::sample::select(vec!["-1", "0", "1/2", "1", "2", "-1/3", "3/4"]).prop_map(exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative(m in 1u64..=1_000_000, n in 1u64..=1_000_000, s in exponent()) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        prop_assert_eq!(check_multiplicative(m, n, &s), Ok(()));
    }

    #[test]
    fn sandwich(m in 1u64..=1_000_000, n in 1u64..=1_000_000, s in exponent()) {
        prop_assume!(!s.is_negative());
        prop_assert_eq!(check_sandwich(m, n, &s), Ok(()));
    }

    #[test]
    fn reflection(m in 1u64..=1_000_000, s in prop::sample::select(vec!["1/2", "1", "2", "2/3"])) {
        prop_assert_eq!(check_reflection(m, &exp(s)), Ok(()));
    }

    #[test]
    fn residue_sums(n in 1u64..=1000, q in 2u64..=4, s in exponent()) {
        prop_assert_eq!(check_residue_sum(n, q, &s), Ok(()));
    }

    #[test]
    fn integer_sigma_matches_divisor_sum(n in 1u64..=200_000, k in -2i64..=3) {
        let v = sigma_s(&fac(n), &Exponent::integer(k), PREC).unwrap();
        prop_assert_eq!(v.as_exact().cloned(), Some(naive_sigma(n, k)));
    }

    #[test]
    fn pow_ball_contains_value(p in 1i64..=10_000, q in 1i64..=1000, u in -7i64..=7, v in 1i64..=9) {
        prop_assume!(num_integer::gcd(u.unsigned_abs(), v as u64) == 1 && v > 1);
        let x = rat(p, q);
        let s = Exponent::rational(u, v).unwrap();
        let (lo, hi) = pow_scalar(&x, &s, 128).unwrap().bounds();
        // lo^v <= x^u <= hi^v, all exact.
        let xu = if u >= 0 { pow_r(&x, u as u32) } else { pow_r(&x, (-u) as u32).recip() };
        prop_assert!(pow_r(&lo, v as u32) <= xu);
        prop_assert!(pow_r(&hi, v as u32) >= xu);
    }

    #[test]
    fn compare_is_antisymmetric(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000, s in exponent()) {
        prop_assume!(a > 0 && c > 0);
        let x = pow_scalar(&rat(a, b), &s, 96).unwrap();
        let y = pow_scalar(&rat(c, d), &s, 96).unwrap();
        let xy = compare(&x, &y);
        prop_assert_eq!(compare(&y, &x), xy.reverse());
        if x.is_exact() && y.is_exact() {
            prop_assert_eq!(xy.ordering(), Some(x.bounds().0.cmp(&y.bounds().0)));
        }
        if let (ScalarValue::Exact(xe), Some(o)) = (&x, xy.ordering()) {
            // A certain answer never contradicts the exact side's value.
            let (lo, hi) = y.bounds();
            prop_assert!(!(o == std::cmp::Ordering::Less && xe >= &hi));
            prop_assert!(!(o == std::cmp::Ordering::Greater && xe <= &lo));
        }
        if !x.is_exact() || !y.is_exact() {
            prop_assert_ne!(xy, Comparison::Equal);
        }
    }

    #[test]
    fn zeta_enclosures_nest(num in 15i64..=80, shift in 4u32..=16) {
        let s = Exponent::rational(num, 10).unwrap();
        let wide = zeta_enclosure(&s, &rat(1, 1 << shift), 10_000_000).unwrap();
        let narrow = zeta_enclosure(&s, &rat(1, 1 << (shift + 8)), 10_000_000).unwrap();
        prop_assert!(wide.lo <= narrow.lo && narrow.hi <= wide.hi);
        prop_assert!(narrow.hi <= s.value() / (s.value() - BigRational::from_integer(1.into())));
    }
}

fn pow_r(x: &BigRational, e: u32) -> BigRational {
    BigRational::new(x.numer().pow(e), x.denom().pow(e))
}

#[test]
fn zeta_fixed_points() {
    assert_eq!(check_zeta2(), Ok(()));
    assert_eq!(check_zeta_cap(), Ok(()));
}

#[test]
fn normalized_sigma_two_is_bounded_by_zeta_two() {
    let z = zeta_enclosure(&Exponent::integer(2), &rat(1, 1 << 30), 10_000_000).unwrap();
    for n in 1..=10_000u64 {
        let r = naive_sigma(n, 2) / BigRational::from_integer(BigInt::from(n * n));
        assert!(r >= rat(1, 1) && r <= z.hi, "n = {n}");
    }
}

mod common;

use common::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use sigma_race::numerics::Comparison;
use sigma_race::witness::{
    certify_omega, certify_ratio, construct_newman_witness, crt_witness, prime_triple_witness,
    verify_document, Artifact, Document,
};

const LADDER: [u32; 4] = [128, 256, 512, 1024];

#[test]
fn small_witnesses_are_sound() {
    for (a, b, c, d, k) in small_witness_params() {
        let w = construct_newman_witness(a, b, c, d, k, 1_000_000).unwrap();
        check_witness_soundness(&w).unwrap_or_else(|e| panic!("({a},{b},{c},{d}) k = {k}: {e}"));
    }
}

#[test]
fn lower_right_grows_with_k() {
    for s in ["0", "1/2", "1"] {
        let mut last = None;
        for k in 4..=18 {
            let w = construct_newman_witness(30, 0, 30, 1, k, 1_000_000).unwrap();
            let c = certify_ratio(&w, &exp(s), 128).unwrap();
            if let Some(prev) = last {
                assert!(c.lower_right >= prev, "s = {s}, k = {k}");
            }
            last = Some(c.lower_right);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witness_identities_hold(a in 1u64..40, b in 0u64..40, c in 1u64..40, d in 0u64..40, k in 1usize..8) {
        prop_assume!(a * d != b * c);
        let w = construct_newman_witness(a, b, c, d, k, 1_000_000).unwrap();
        let det = (a as i128 * d as i128 - b as i128 * c as i128).unsigned_abs();
        prop_assert_eq!(det % w.delta.to_u128().unwrap(), 0);
        prop_assert_eq!(&w.n * c + d, &w.m_k * &w.y);
        prop_assert_eq!(&w.n * a + b, &w.delta * &w.q);
        prop_assert!(w.q.to_u128().map_or(true, |q| q > det));
        let omega = certify_omega(&w).unwrap();
        let doc = Document::new(Artifact::Newman { witness: w, certificate: None, omega });
        let back = Document::from_json(&doc.to_json().unwrap()).unwrap();
        prop_assert!(verify_document(&back, &LADDER).is_ok());
    }
}

#[test]
fn triples_compare_by_direct_evaluation() {
    for s in ["1", "2", "1/2"] {
        let ws = prime_triple_witness(&exp(s), 3, 100_000, &LADDER).unwrap();
        for w in &ws {
            assert!(w.p > w.bound);
            if let Some(k) = w.s.as_integer() {
                let (l, m, r) = (naive_sigma(w.p - 1, k), naive_sigma(w.p, k), naive_sigma(w.p + 1, k));
                assert!(l > m && m < r, "p = {}", w.p);
            } else {
                let f = |n| float_sigma(n, w.s.to_f64());
                assert!(f(w.p - 1) > f(w.p) && f(w.p) < f(w.p + 1));
            }
        }
        let doc = Document::new(Artifact::Triple { witnesses: ws });
        verify_document(&doc, &LADDER).unwrap();
    }
}

#[test]
fn crt_witnesses_win_both_ways() {
    for (a, b, d, s) in [(2, 1, 3, "1"), (6, 1, 7, "1/2"), (10, 3, 7, "2"), (4, 1, 3, "1")] {
        let w = crt_witness(a, b, d, &exp(s), None, 1_000_000, &LADDER).unwrap();
        assert_eq!((w.m_comparison, w.n_comparison), (Comparison::Less, Comparison::Greater));
        if let (Some(m), Some(n), Some(k)) = (w.m.to_u64(), w.n.to_u64(), w.s.as_integer()) {
            assert!(naive_sigma(a * m + w.b, k) < naive_sigma(a * m + w.d, k));
            assert!(naive_sigma(a * n + w.b, k) > naive_sigma(a * n + w.d, k));
        }
        verify_document(&Document::new(Artifact::Crt { witness: w }), &LADDER).unwrap();
    }
}

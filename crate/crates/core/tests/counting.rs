use proptest::prelude::*;
use rug::Integer;

use regover::combinatorics::{count, enumerate, for_each, verify_lemma, Constraint, Lemma};
use regover::inequalities::check_subadditivity;
use regover::qseries::{pk, pk_series};

#[test]
fn series_matches_product_count_to_300() {
    for k in 2..=9u32 {
        let s = pk_series(k, 300).unwrap();
        let c = Constraint::regular(k).unwrap();
        for n in [0u64, 1, 7, 50, 123, 299, 300] {
            assert_eq!(s.coeffs()[n as usize], count(n, &c), "k={k} n={n}");
        }
    }
}

#[test]
fn large_k_agrees_with_overpartition_numbers() {
    // no part of n can be a multiple of k once k > n
    for n in 0..=30u64 {
        assert_eq!(pk(31, n as usize).unwrap(), count(n, &Constraint::none()));
    }
}

#[test]
fn enumeration_counts_match_series_to_25() {
    for k in 2..=9u32 {
        let c = Constraint::regular(k).unwrap();
        for n in 0..=25u64 {
            let mut seen = 0u64;
            for_each(n, &c, |o| {
                assert!(o.satisfies(&c) && o.weight() == n);
                seen += 1;
            });
            assert_eq!(pk(k, n as usize).unwrap(), seen, "k={k} n={n}");
        }
    }
}

#[test]
fn theorem_instance_at_a_plus_b_equal_k() {
    assert!(check_subadditivity(3, 2, 1).unwrap());
    assert_eq!(pk(3, 2).unwrap() * pk(3, 1).unwrap(), 8);
    assert_eq!(pk(3, 3).unwrap(), 6);
}

#[test]
fn lemma_reports_for_spec_examples() {
    let r = verify_lemma(Lemma::AddOne, 2, 5, 1).unwrap();
    assert!(r.holds && r.strict && r.injective == Some(true));
    let r = verify_lemma(Lemma::NoOnesNoTwos, 2, 1, 1).unwrap();
    assert!(r.holds);
    assert!(verify_lemma(Lemma::AddOne, 3, 4, 2).is_err());
    assert!(verify_lemma(Lemma::AddMany, 5, 1, 3).is_err());
    assert!(verify_lemma(Lemma::AddOne, 1, 3, 1).is_err());
}

#[test]
fn lemma_2_1_fails_at_k2_because_no_ones_is_empty_at_two() {
    let c = Constraint::regular(2).unwrap().no_ones();
    assert!(enumerate(2, &c).is_empty());
    let r = verify_lemma(Lemma::NoOnesNoTwos, 2, 2, 1).unwrap();
    assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.holds), ("0", "2", false));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subadditivity_agrees_with_enumeration(k in 3u32..=9, a in 1u64..=14, b in 1u64..=14) {
        let (a, b) = if a >= b { (a, b) } else { (b, a) };
        prop_assume!(a + b >= u64::from(k));
        let c = Constraint::regular(k).unwrap();
        let lhs = Integer::from(enumerate(a, &c).len()) * enumerate(b, &c).len();
        let rhs = Integer::from(enumerate(a + b, &c).len());
        prop_assert_eq!(check_subadditivity(k, a, b).unwrap(), lhs > rhs);
        prop_assert!(lhs > rhs);
    }
}

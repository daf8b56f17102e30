use proptest::prelude::*;
use rug::{Float, Integer, Rational};

use regover::numerics::{bessel_i1, bessel_i1_asymptotic_bounds, bessel_i1_upper_simple, dedekind_sum, Interval};

fn nested(coarse: &Interval, fine: &Interval) -> bool {
    coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi()
}

// s(h, j) straight from the sawtooth definition, in exact rationals
fn sawtooth_sum(h: i64, j: u64) -> Rational {
    let saw = |x: Rational| -> Rational {
        if x.is_integer() {
            return Rational::new();
        }
        let fl = x.clone().floor();
        x - fl - Rational::from((1, 2))
    };
    (1..j as i64).fold(Rational::new(), |acc, r| {
        let a = saw(Rational::from((r, j as i64)));
        let b = saw(Rational::from((h * r, j as i64)));
        acc + a * b
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dedekind_reciprocity(h in 1u64..=500, j in 1u64..=500) {
        prop_assume!(Integer::from(h).gcd(&Integer::from(j)) == 1);
        let lhs = dedekind_sum(h as i64, j).unwrap() + dedekind_sum(j as i64, h).unwrap();
        let rhs = Rational::from((-1, 4)) + Rational::from(((h * h + j * j + 1) as i64, 12 * (h * j) as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dedekind_matches_sawtooth_definition(h in -60i64..=60, j in 1u64..=60) {
        prop_assume!(Integer::from(h).gcd(&Integer::from(j)) == 1);
        prop_assert_eq!(dedekind_sum(h, j).unwrap(), sawtooth_sum(h, j));
    }

    #[test]
    fn refinement_is_monotone(num in -5000i64..=5000, den in 1i64..=500, num2 in 1i64..=5000, den2 in 1i64..=500, op in 0u8..7) {
        let eval = |prec: u32| -> Interval {
            let x = Interval::from_ratio(num, den, prec);
            let y = Interval::from_ratio(num2, den2, prec);
            match op {
                0 => x.add(&y),
                1 => x.sub(&y),
                2 => x.mul(&y),
                3 => x.div(&y).unwrap(),
                4 => y.sqrt().unwrap(),
                5 => Interval::from_ratio(num, den * 50, prec).exp().unwrap(),
                _ => y.recip().unwrap(),
            }
        };
        let (a, b, c) = (eval(64), eval(160), eval(640));
        prop_assert!(nested(&a, &b) && nested(&b, &c));
        prop_assert!(b.width() <= a.width() && c.width() <= b.width());
    }

    #[test]
    fn asymptotic_bessel_bounds_enclose(milli in 26_000u64..=500_000) {
        let s = Interval::from_ratio(milli as i64, 1000, 256);
        let exact = bessel_i1(&s.with_prec(512)).unwrap();
        let (lo, hi) = bessel_i1_asymptotic_bounds(&s).unwrap();
        prop_assert!(lo.hi() < exact.lo());
        prop_assert!(exact.hi() < hi.lo());
        prop_assert!(exact.hi() < bessel_i1_upper_simple(&s).unwrap().lo());
    }
}

#[test]
fn bessel_bounds_need_large_argument() {
    let s = Interval::from_i64(25, 128);
    assert!(bessel_i1_asymptotic_bounds(&s).is_err());
}

#[test]
fn bessel_matches_f64_reference_at_moderate_argument() {
    // I₁(10) = 2670.988303701254654...
    let v = bessel_i1(&Interval::from_i64(10, 128)).unwrap();
    let reference = Float::with_val(128, Float::parse("2670.98830370125465434103196677215254").unwrap());
    assert!((v.to_f64() - 2670.988303701255).abs() < 1e-9);
    assert!(v.width() < 1e-30);
    assert!((Float::with_val(128, v.mid() - &reference)).abs() < 1e-25);
}

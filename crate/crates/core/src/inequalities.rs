//! Exact checks of log-subadditivity, log-concavity and the third-order
//! Turán inequality for p̄ₖ(n), plus interval checks of the Q-ratio bounds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Serialize, Serializer};

use crate::chern::MAX_PRECISION;
use crate::error::{Error, Result};
use crate::numerics::{check_asymptotic_k, escalate, mu, Interval};
use crate::qseries::pk_cached_series;

fn series(k: u32, order: u64) -> Result<std::sync::Arc<crate::qseries::IntegerSeries>> {
    let order = usize::try_from(order).map_err(|_| Error::Overflow("series order"))?;
    pk_cached_series(k, order)
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidK { k, min: 2 });
    }
    Ok(())
}

/// Exact test of `p̄ₖ(a) p̄ₖ(b) > p̄ₖ(a+b)` for `a >= b >= 1`, `a + b >= k`.
pub fn check_subadditivity(k: u32, a: u64, b: u64) -> Result<bool> {
    check_k(k)?;
    if b < 1 || a < b || a + b < u64::from(k) {
        return Err(Error::Precondition(format!(
            "need a >= b >= 1 and a + b >= k, got k = {k}, a = {a}, b = {b}"
        )));
    }
    let s = series(k, a + b)?;
    let c = s.coeffs();
    Ok(Integer::from(&c[a as usize] * &c[b as usize]) > c[(a + b) as usize])
}

fn ser_rational<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `Q_k(n) = p̄ₖ(n-1) p̄ₖ(n+1) / p̄ₖ(n)²`, exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QRatio {
    pub k: u32,
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

pub fn q_ratio(k: u32, n: u64) -> Result<QRatio> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::Precondition("Q needs n >= 1".into()));
    }
    let s = series(k, n + 1)?;
    let c = s.coeffs();
    let n = n as usize;
    let num = Integer::from(&c[n - 1] * &c[n + 1]);
    let den = Integer::from(c[n].square_ref());
    Ok(QRatio { k, n: n as u64, value: Rational::from((num, den)) })
}

/// Sign of `p̄ₖ(n)² - p̄ₖ(n-1) p̄ₖ(n+1)`.
pub fn logconcave_margin(k: u32, n: u64) -> Result<Ordering> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::Precondition("log-concavity needs n >= 1".into()));
    }
    let s = series(k, n + 1)?;
    Ok(logconcave_sign(s.coeffs(), n as usize))
}

fn logconcave_sign(c: &[Integer], n: usize) -> Ordering {
    let sq = Integer::from(c[n].square_ref());
    sq.cmp(&Integer::from(&c[n - 1] * &c[n + 1]))
}

/// `p̄ₖ(n)² >= p̄ₖ(n-1) p̄ₖ(n+1)`. Equality does occur for a few small n;
/// use [`logconcave_margin`] to tell the strict case apart.
pub fn check_logconcave(k: u32, n: u64) -> Result<bool> {
    Ok(logconcave_margin(k, n)? != Ordering::Less)
}

fn turan3_holds(c: &[Integer], n: usize) -> bool {
    let (a0, a1, a2, a3) = (&c[n - 1], &c[n], &c[n + 1], &c[n + 2]);
    let d1 = Integer::from(a1.square_ref()) - Integer::from(a0 * a2);
    let d2 = Integer::from(a2.square_ref()) - Integer::from(a1 * a3);
    let cross = Integer::from(a1 * a2) - Integer::from(a0 * a3);
    let lhs = Integer::from(&d1 * &d2) * 4u32;
    lhs > Integer::from(cross.square_ref())
}

/// Strict third-order Turán inequality at n, in exact integers.
pub fn check_turan3(k: u32, n: u64) -> Result<bool> {
    check_k(k)?;
    if n < 1 {
        return Err(Error::Precondition("Turán check needs n >= 1".into()));
    }
    let s = series(k, n + 2)?;
    Ok(turan3_holds(s.coeffs(), n as usize))
}

/// Sufficient condition for the third-order Turán inequality from two
/// consecutive Q-ratios: `15/16 <= u < v < 1` and `u + sqrt((1-u)³) > v`.
pub fn jia_criterion(u: &Rational, v: &Rational) -> bool {
    if *u < Rational::from((15, 16)) || u >= v || *v >= 1 {
        return false;
    }
    // v - u > 0 here, so the root comparison squares safely
    let gap = Rational::from(v - u);
    let one_minus_u = Rational::from(1 - u);
    Rational::from(gap.square_ref()) < Rational::from(one_minus_u.square_ref()) * one_minus_u
}

/// `4(1-u)(1-v) - (1-uv)² > 0`, the conclusion of the criterion.
pub fn jia_conclusion(u: &Rational, v: &Rational) -> bool {
    let a = Rational::from(1 - u);
    let b = Rational::from(1 - v);
    let c: Rational = 1 - Rational::from(u * v);
    (a * b) * 4u32 > Rational::from(c.square_ref())
}

/// Validity thresholds (in n) for [`q_bounds`].
pub const Q_BOUND_THRESHOLDS: [u64; 8] = [5652, 365, 455, 1120, 2055, 1230, 10422, 8187];

/// Coefficients of `1 - a3/μ³ + a4/μ⁴ - c5/μ⁵ ∓ c6/μ⁶`: a3 and a4 are rational
/// multiples of π⁴, the upper sixth-order term adds a rational multiple of π⁸.
struct QRow {
    a3: (i64, i64),
    a4: (i64, i64),
    l5: i64,
    l6: i64,
    r5: i64,
    r6: i64,
    r6_pi8: (i64, i64),
}

const Q_TABLE: [QRow; 8] = [
    QRow { a3: (1, 16), a4: (3, 16), l5: 7, l6: 130, r5: 6, r6: 120, r6_pi8: (1, 256) },
    QRow { a3: (1, 9), a4: (1, 3), l5: 13, l6: 200, r5: 6, r6: 146, r6_pi8: (1, 81) },
    QRow { a3: (9, 64), a4: (27, 64), l5: 16, l6: 300, r5: 15, r6: 150, r6_pi8: (81, 4096) },
    QRow { a3: (4, 25), a4: (12, 25), l5: 18, l6: 400, r5: 17, r6: 400, r6_pi8: (0, 1) },
    QRow { a3: (25, 144), a4: (25, 48), l5: 20, l6: 441, r5: 19, r6: 441, r6_pi8: (0, 1) },
    QRow { a3: (9, 49), a4: (27, 49), l5: 21, l6: 500, r5: 20, r6: 500, r6_pi8: (0, 1) },
    QRow { a3: (49, 256), a4: (147, 256), l5: 21, l6: 505, r5: 20, r6: 505, r6_pi8: (0, 1) },
    QRow { a3: (16, 81), a4: (16, 27), l5: 22, l6: 524, r5: 21, r6: 529, r6_pi8: (0, 1) },
];

pub fn q_bound_threshold(k: u32) -> Result<u64> {
    Ok(Q_BOUND_THRESHOLDS[check_asymptotic_k(k)?])
}

/// Enclosures `(L̃ₖ(n), R̃ₖ(n))` of the two Q-ratio bounds; needs n >= ñₖ.
pub fn q_bounds(k: u32, n: u64, prec: u32) -> Result<(Interval, Interval)> {
    let threshold = q_bound_threshold(k)?;
    if n < threshold {
        return Err(Error::BelowThreshold {
            what: "Q-ratio bounds",
            k,
            unit: "n",
            threshold,
            actual: n.to_string(),
        });
    }
    let row = &Q_TABLE[(k - 2) as usize];
    let m = mu(k, n, prec)?.value;
    let inv = m.recip()?;
    let pows: Vec<Interval> = (3..=6).map(|e| inv.pow_i32(e)).collect::<Result<_>>()?;
    let pi = Interval::pi(prec);
    let pi4 = pi.pow_i32(4)?;
    let pi8 = pi4.mul(&pi4);
    let ratio = |(a, b): (i64, i64)| Interval::from_ratio(a, b, prec);
    let int = |v: i64| Interval::from_i64(v, prec);

    let common = int(1)
        .sub(&ratio(row.a3).mul(&pi4).mul(&pows[0]))
        .add(&ratio(row.a4).mul(&pi4).mul(&pows[1]));
    let lower = common
        .sub(&int(row.l5).mul(&pows[2]))
        .sub(&int(row.l6).mul(&pows[3]));
    let r6 = int(row.r6).add(&ratio(row.r6_pi8).mul(&pi8));
    let upper = common
        .sub(&int(row.r5).mul(&pows[2]))
        .add(&r6.mul(&pows[3]));
    Ok((lower, upper))
}

/// Outcome of comparing exact Q with its bounds at one n.
#[derive(Debug, Clone, Serialize)]
pub struct QBoundCheck {
    pub k: u32,
    pub n: u64,
    pub lower: Interval,
    pub upper: Interval,
    /// `L̃ < Q < R̃`.
    pub contained: bool,
    /// `R̃ < 1`.
    pub upper_below_one: bool,
    pub precision: u32,
}

/// Decides `L̃ < Q < R̃` and `R̃ < 1` definitely, escalating precision.
pub fn check_q_bounds(k: u32, n: u64, prec: u32) -> Result<QBoundCheck> {
    let q = q_ratio(k, n)?.value;
    let one = Rational::from(1);
    escalate(prec, MAX_PRECISION, |p| {
        let (lower, upper) = q_bounds(k, n, p)?;
        let (Some(lo_cmp), Some(hi_cmp), Some(one_cmp)) = (
            lower.compare_rational(&q),
            upper.compare_rational(&q),
            upper.compare_rational(&one),
        ) else {
            return Ok(None);
        };
        Ok(Some(QBoundCheck {
            k,
            n,
            contained: lo_cmp == Ordering::Less && hi_cmp == Ordering::Greater,
            upper_below_one: one_cmp == Ordering::Less,
            lower,
            upper,
            precision: p,
        }))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Logconcave,
    Turan3,
    Subadd,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Logconcave => "logconcave",
            Property::Turan3 => "turan3",
            Property::Subadd => "subadd",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logconcave" => Ok(Property::Logconcave),
            "turan3" => Ok(Property::Turan3),
            "subadd" => Ok(Property::Subadd),
            other => Err(Error::Domain(format!("unknown property {other:?}"))),
        }
    }
}

/// Published starting points for log-concavity, k = 2..=9.
pub const LOGCONCAVE_THRESHOLDS: [u64; 8] = [21, 4, 5, 6, 1, 1, 1, 1];

/// Published starting points for the third-order Turán inequality.
pub const TURAN3_THRESHOLDS: [u64; 8] = [65, 23, 28, 26, 11, 22, 23, 10];

/// Claimed threshold for `property`. For subadditivity it is the smallest
/// allowed `a + b`, namely k.
pub fn published_threshold(k: u32, property: Property) -> Result<u64> {
    match property {
        Property::Subadd => {
            check_k(k)?;
            Ok(u64::from(k))
        }
        Property::Logconcave => Ok(LOGCONCAVE_THRESHOLDS[check_asymptotic_k(k)?]),
        Property::Turan3 => Ok(TURAN3_THRESHOLDS[check_asymptotic_k(k)?]),
    }
}

/// One sweep outcome at a single n (for subadditivity, n is `a + b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub k: u32,
    pub n: u64,
    pub property: Property,
    pub holds: bool,
    /// Set when the weak log-concavity inequality is an equality.
    pub equality: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub k: u32,
    pub property: Property,
    pub published_threshold: u64,
    /// Smallest n0 with the property holding on all of `n0..=horizon`;
    /// `horizon + 1` when it fails at the horizon itself.
    pub observed_min_threshold: u64,
    pub horizon: u64,
    /// Every failing n (all lie below `observed_min_threshold`).
    pub exceptions_below: Vec<u64>,
    /// n where `p̄ₖ(n)² = p̄ₖ(n-1) p̄ₖ(n+1)` (log-concavity only).
    pub equalities: Vec<u64>,
    /// Failures at or above the published threshold; empty when the claim
    /// holds on the swept range.
    pub violations: Vec<u64>,
}

impl ThresholdReport {
    pub fn agrees_with_published(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-n verdicts for `property` on `1..=horizon` (subadditivity: every
/// `a + b = n` with `a >= b >= 1`, from `n = 2`).
pub fn sweep(k: u32, property: Property, horizon: u64) -> Result<Vec<Verdict>> {
    check_k(k)?;
    let extra = match property {
        Property::Logconcave => 1,
        Property::Turan3 => 2,
        Property::Subadd => 0,
    };
    let s = series(k, horizon + extra)?;
    let c = s.coeffs();
    let start = if property == Property::Subadd { 2 } else { 1 };
    let verdicts = (start..=horizon)
        .into_par_iter()
        .map(|n| {
            let i = n as usize;
            let (holds, equality) = match property {
                Property::Logconcave => {
                    let sign = logconcave_sign(c, i);
                    (sign != Ordering::Less, sign == Ordering::Equal)
                }
                Property::Turan3 => (turan3_holds(c, i), false),
                Property::Subadd => {
                    let ok = (1..=i / 2).all(|b| Integer::from(&c[i - b] * &c[b]) > c[i]);
                    (ok, false)
                }
            };
            Verdict { k, n, property, holds, equality }
        })
        .collect();
    Ok(verdicts)
}

/// Sweeps `property` up to `horizon` and compares with the published threshold.
pub fn scan_thresholds(k: u32, property: Property, horizon: u64) -> Result<ThresholdReport> {
    let published = published_threshold(k, property)?;
    if horizon < published {
        return Err(Error::Precondition(format!(
            "horizon {horizon} is below the published threshold {published} for {property}, k = {k}"
        )));
    }
    let verdicts = sweep(k, property, horizon)?;
    let exceptions: Vec<u64> = verdicts.iter().filter(|v| !v.holds).map(|v| v.n).collect();
    let equalities = verdicts.iter().filter(|v| v.equality).map(|v| v.n).collect();
    let start = verdicts.first().map_or(horizon + 1, |v| v.n);
    let observed = exceptions.last().map_or(start, |&n| n + 1);
    let violations = exceptions.iter().copied().filter(|&n| n >= published).collect();
    Ok(ThresholdReport {
        k,
        property,
        published_threshold: published,
        observed_min_threshold: observed,
        horizon,
        exceptions_below: exceptions,
        equalities,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::pk;

    #[test]
    fn subadditivity_examples() {
        assert!(check_subadditivity(2, 1, 1).unwrap());
        assert!(check_subadditivity(9, 8, 1).unwrap());
        assert!(check_subadditivity(3, 2, 1).unwrap());
        assert!(check_subadditivity(5, 2, 3).is_err());
        assert!(check_subadditivity(5, 2, 2).is_err());
        assert!(check_subadditivity(2, 1, 0).is_err());
        assert!(check_subadditivity(1, 3, 3).is_err());
    }

    #[test]
    fn q_ratio_examples() {
        assert_eq!(q_ratio(2, 1).unwrap().value, Rational::from((1, 2)));
        for n in 1..50 {
            assert!(q_ratio(4, n).unwrap().value > 0);
        }
        assert!(q_ratio(2, 0).is_err());
    }

    #[test]
    fn logconcave_equalities_exist_below_strictness() {
        assert_eq!(logconcave_margin(3, 6).unwrap(), Ordering::Equal);
        assert!(check_logconcave(3, 6).unwrap());
        assert!(check_logconcave(6, 1).unwrap());
    }

    #[test]
    fn turan_examples() {
        assert!(check_turan3(9, 10).unwrap());
        assert!(check_turan3(2, 65).unwrap());
    }

    // Oracle for the Turán form: expand the printed inequality with i128 on
    // small values, independent of the big-integer grouping above.
    #[test]
    fn turan_agrees_with_naive_small_integer_form() {
        for k in 2..=9u32 {
            for n in 1..=20u64 {
                let a: Vec<i128> = (n - 1..=n + 2)
                    .map(|i| pk(k, i as usize).unwrap().to_i128().unwrap())
                    .collect();
                let lhs = 4 * (a[1] * a[1] - a[0] * a[2]) * (a[2] * a[2] - a[1] * a[3]);
                let rhs = (a[1] * a[2] - a[0] * a[3]).pow(2);
                assert_eq!(check_turan3(k, n).unwrap(), lhs > rhs, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn jia_examples() {
        let u = Rational::from((15, 16));
        let v = Rational::from((151, 160));
        assert!(jia_criterion(&u, &v));
        assert!(!jia_criterion(&u, &u));
        assert!(!jia_criterion(&Rational::from((1, 2)), &Rational::from((3, 4))));
        // (v-u)² = (1-u)³ exactly is not enough
        let edge = &u + Rational::from((1, 64));
        assert!(!jia_criterion(&u, &edge));
    }

    #[test]
    fn jia_implies_turan_on_q_pairs() {
        let u = q_ratio(2, 6000).unwrap().value;
        let v = q_ratio(2, 6001).unwrap().value;
        assert!(jia_criterion(&u, &v));
        assert!(jia_conclusion(&u, &v));
        for n in 100..400 {
            let u = q_ratio(3, n).unwrap().value;
            let v = q_ratio(3, n + 1).unwrap().value;
            if jia_criterion(&u, &v) {
                assert!(jia_conclusion(&u, &v));
                assert!(check_turan3(3, n).unwrap());
            }
        }
    }

    #[test]
    fn q_bounds_threshold_error() {
        let err = q_bounds(8, 9000, 128).unwrap_err();
        assert!(matches!(err, Error::BelowThreshold { threshold: 10422, .. }));
        assert!(err.to_string().contains("10422"));
    }

    #[test]
    fn q_bounds_contain_q_for_k3() {
        for n in [365u64, 366, 500, 900] {
            let c = check_q_bounds(3, n, 192).unwrap();
            assert!(c.contained && c.upper_below_one, "n={n}");
        }
    }

    #[test]
    fn scan_reports() {
        let r = scan_thresholds(6, Property::Logconcave, 300).unwrap();
        assert_eq!(r.observed_min_threshold, 1);
        assert!(r.agrees_with_published());
        let r = scan_thresholds(2, Property::Turan3, 300).unwrap();
        assert!(r.observed_min_threshold <= 65);
        assert!(r.agrees_with_published());
        // p̄₂(2) = p̄₂(1) = 2 breaks strictness for b = 2 and small a
        let r = scan_thresholds(2, Property::Subadd, 60).unwrap();
        assert_eq!(r.exceptions_below, vec![3, 4, 5, 6, 7]);
        assert_eq!(r.observed_min_threshold, 8);
        assert!(!r.agrees_with_published());
        assert!(!check_subadditivity(2, 2, 2).unwrap());
        for k in 3..=9 {
            assert!(scan_thresholds(k, Property::Subadd, 60).unwrap().agrees_with_published());
        }
        assert!(scan_thresholds(2, Property::Turan3, 50).is_err());
        let r = scan_thresholds(3, Property::Logconcave, 100).unwrap();
        assert!(r.equalities.contains(&6));
    }
}

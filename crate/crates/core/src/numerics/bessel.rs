//! Rigorous enclosures of the modified Bessel function I₁ and of the
//! classical large-argument bounds around it.

use rug::Float;

use super::interval::Interval;
use crate::error::{Error, Result};

const GUARD_BITS: u32 = 16;

/// I₁ at a single non-negative point, enclosed at `prec` bits.
///
/// Sums `(x/2)^{2m+1} / (m! (m+1)!)` until the ratio of consecutive terms is
/// below 1/2 and the next term is below `2^-(prec+8)` of the partial sum, then
/// adds the geometric majorant `2 * t_{m+1}` of the remaining tail.
fn i1_point(x: &Float, prec: u32) -> Interval {
    let work = prec + GUARD_BITS;
    if x.is_zero() {
        return Interval::from_i64(0, prec);
    }
    let xi = Interval::new(x.clone(), x.clone())
        .expect("finite point")
        .with_prec(work.max(x.prec()));
    let half = xi.div_i64(2).expect("nonzero divisor");
    let half_sq = half.mul(&half);
    let threshold = half_sq.hi().clone() * 2u32;
    let mut term = half;
    let mut sum = term.clone();
    let mut m: u64 = 0;
    loop {
        let denom = ((m + 1) * (m + 2)) as i64;
        let next = term
            .mul(&half_sq)
            .div_i64(denom)
            .expect("positive divisor");
        let ratio_small = Float::with_val(64, denom) > threshold;
        let cutoff = Float::with_val(work, sum.lo()) >> (prec + 8);
        if ratio_small && *next.hi() < cutoff {
            let tail = Float::with_val_round(work, next.hi() * 2u32, rug::float::Round::Up).0;
            return sum.add_tail(&tail).with_prec(prec);
        }
        sum = sum.add(&next);
        term = next;
        m += 1;
    }
}

/// Enclosure of I₁(s) for `s.lo >= 0`; I₁ is increasing there.
pub fn bessel_i1(s: &Interval) -> Result<Interval> {
    if *s.lo() < 0 {
        return Err(Error::Domain(format!("I1 needs a non-negative argument, got lo = {}", s.lo())));
    }
    let prec = s.prec();
    let lo = i1_point(s.lo(), prec);
    if s.lo() == s.hi() {
        return Ok(lo);
    }
    let hi = i1_point(s.hi(), prec);
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// `1 - 3/(8s) - 15/(128s²) - 105/(1024s³) - 4725/(32768s⁴) - 72765/(262144s⁵)`.
pub fn e_i(s: &Interval) -> Result<Interval> {
    if *s.lo() <= 0 {
        return Err(Error::Domain("E_I needs s > 0".into()));
    }
    let p = s.prec();
    let t = s.recip()?;
    let coeffs: [(i64, i64); 5] = [
        (72765, 262144),
        (4725, 32768),
        (105, 1024),
        (15, 128),
        (3, 8),
    ];
    // Horner in t = 1/s: 1 - t(c1 + t(c2 + ... ))
    let mut acc = Interval::from_i64(0, p);
    for (num, den) in coeffs {
        acc = acc.mul(&t).add(&Interval::from_ratio(num, den, p));
    }
    Ok(Interval::from_i64(1, p).sub(&acc.mul(&t)))
}

/// Two-sided bound `e^s / sqrt(2 pi s) * (E_I(s) -+ 31/s^6)` valid for `s >= 26`.
pub fn bessel_i1_asymptotic_bounds(s: &Interval) -> Result<(Interval, Interval)> {
    if *s.lo() < 26 {
        return Err(Error::BelowThreshold {
            what: "large-argument I1 bound",
            k: 0,
            unit: "s",
            threshold: 26,
            actual: s.lo().to_string(),
        });
    }
    let p = s.prec();
    let pi = Interval::pi(p);
    let factor = s.exp()?.div(&pi.mul(s).mul_i64(2).sqrt()?)?;
    let ei = e_i(s)?;
    let slack = Interval::from_i64(31, p).div(&s.pow_i32(6)?)?;
    Ok((factor.mul(&ei.sub(&slack)), factor.mul(&ei.add(&slack))))
}

/// Simple majorant `sqrt(2 / (pi s)) e^s` of I₁(s), valid for `s >= 1`.
pub fn bessel_i1_upper_simple(s: &Interval) -> Result<Interval> {
    if *s.lo() < 1 {
        return Err(Error::Domain(format!("simple I1 majorant needs s >= 1, got lo = {}", s.lo())));
    }
    let p = s.prec();
    let pi = Interval::pi(p);
    let root = Interval::from_i64(2, p).div(&pi.mul(s))?.sqrt()?;
    Ok(root.mul(&s.exp()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    // Independent reference: same series summed in plain MPFR at much higher
    // precision with a fixed, generous number of terms.
    fn reference_i1(x: &Rational, bits: u32) -> Float {
        let xf = Float::with_val(bits, x);
        let h = Float::with_val(bits, &xf / 2u32);
        let h2 = Float::with_val(bits, &h * &h);
        let mut term = h.clone();
        let mut sum = h;
        let terms = 200 + 4 * x.to_f64().ceil() as u64;
        for m in 0..terms {
            term = term * &h2 / ((m + 1) * (m + 2));
            sum += &term;
        }
        sum
    }

    #[test]
    fn i1_at_zero_is_zero() {
        let z = bessel_i1(&Interval::from_i64(0, 128)).unwrap();
        assert_eq!(*z.lo(), 0);
        assert_eq!(*z.hi(), 0);
    }

    #[test]
    fn i1_at_one_matches_reference() {
        let v = bessel_i1(&Interval::from_i64(1, 192)).unwrap();
        assert!(v.contains_float(&reference_i1(&Rational::from(1), 600)));
        assert!((v.to_f64() - 0.565_159_103_992_485).abs() < 1e-15);
    }

    #[test]
    fn i1_encloses_reference_on_a_grid() {
        for num in [1i64, 7, 50, 333, 1000, 4321] {
            let x = Rational::from((num, 10));
            let v = bessel_i1(&Interval::from_rational(&x, 160)).unwrap();
            assert!(v.contains_float(&reference_i1(&x, 800)), "x = {x}");
            let rel = Float::with_val(64, v.width()) / v.lo();
            assert!(rel < Float::with_val(64, Float::i_exp(1, -140)), "x = {x}: {rel}");
        }
    }

    #[test]
    fn i1_rejects_negative_arguments() {
        assert!(bessel_i1(&Interval::from_i64(-1, 64)).is_err());
    }

    #[test]
    fn e_i_exact_rational_value() {
        for s in [26i64, 32, 100] {
            let r = Rational::from(s);
            let expected = Rational::from(1)
                - Rational::from((3, 8)) / &r
                - Rational::from((15, 128)) / r.clone().square()
                - Rational::from((105, 1024)) / (r.clone().square() * &r)
                - Rational::from((4725, 32768)) / r.clone().square().square()
                - Rational::from((72765, 262144)) / (r.clone().square().square() * &r);
            let got = e_i(&Interval::from_i64(s, 192)).unwrap();
            assert!(got.contains_rational(&expected), "s = {s}");
            if s == 26 {
                assert!(expected > 0 && expected < 1);
            }
        }
        let big = e_i(&Interval::from_i64(1 << 40, 128)).unwrap();
        assert!(big.compare(&Interval::from_ratio(999_999, 1_000_000, 128)) == Some(std::cmp::Ordering::Greater));
        assert!(e_i(&Interval::from_i64(0, 64)).is_err());
    }

    #[test]
    fn asymptotic_bounds_bracket_i1_at_26() {
        let s = Interval::from_i64(26, 192);
        let (lo, hi) = bessel_i1_asymptotic_bounds(&s).unwrap();
        let v = bessel_i1(&s).unwrap();
        assert!(lo.hi() <= v.lo() && v.hi() <= hi.lo());
        assert!(bessel_i1_asymptotic_bounds(&Interval::from_i64(25, 64)).is_err());
    }

    #[test]
    fn simple_majorant() {
        let one = Interval::from_i64(1, 128);
        let up = bessel_i1_upper_simple(&one).unwrap();
        assert!((up.to_f64() - 2.168_87).abs() < 1e-4);
        assert!(bessel_i1(&one).unwrap().hi() < up.lo());

        let s = Interval::from_i64(26, 192);
        let (_, lemma_hi) = bessel_i1_asymptotic_bounds(&s).unwrap();
        assert!(lemma_hi.hi() < bessel_i1_upper_simple(&s).unwrap().lo());

        let mut prev = up;
        for x in 2..60 {
            let cur = bessel_i1_upper_simple(&Interval::from_i64(x, 128)).unwrap();
            assert!(prev.hi() < cur.lo());
            prev = cur;
        }
        assert!(bessel_i1_upper_simple(&Interval::from_ratio(1, 2, 64)).is_err());
    }
}

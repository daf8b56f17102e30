//! Closed intervals `[lo, hi]` of MPFR floats with outward rounding.
//!
//! Every operation rounds its lower endpoint toward -inf and its upper
//! endpoint toward +inf, so the result encloses the exact image of the inputs.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AssignRound, Pow};
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Working precision used when a caller does not pick one.
pub const DEFAULT_PRECISION: u32 = 192;

/// Smallest precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

fn down<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Down).0
}

fn up<T>(prec: u32, v: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, v, Round::Up).0
}

fn min_f(a: Float, b: Float) -> Float {
    if b < a {
        b
    } else {
        a
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

impl Interval {
    /// Builds `[lo, hi]`; fails if the endpoints are unordered or NaN.
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Domain(format!("invalid interval endpoints [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    fn raw(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        Self::raw(down(prec, v), up(prec, v))
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::raw(down(prec, v), up(prec, v))
    }

    pub fn from_rational(v: &Rational, prec: u32) -> Self {
        Self::raw(down(prec, v), up(prec, v))
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from((num, den)), prec)
    }

    /// Enclosure of π.
    pub fn pi(prec: u32) -> Self {
        Self::raw(down(prec, Constant::Pi), up(prec, Constant::Pi))
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    fn joint_prec(&self, other: &Self) -> u32 {
        self.prec().max(other.prec())
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    /// Midpoint (nearest rounding; not an enclosure).
    pub fn mid(&self) -> Float {
        Float::with_val(self.prec() + 2, &self.lo + &self.hi) / 2u32
    }

    pub fn contains_float(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn contains_integer(&self, v: &Integer) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_rational(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    /// True if `other` lies inside `self`.
    pub fn encloses(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certain ordering: `Some(Less)` if every point of `self` is below every
    /// point of `other`, `Some(Greater)` for the reverse, `None` on overlap.
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certain comparison of the enclosed value against an exact integer.
    pub fn compare_integer(&self, v: &Integer) -> Option<Ordering> {
        if self.hi < *v {
            Some(Ordering::Less)
        } else if self.lo > *v {
            Some(Ordering::Greater)
        } else if self.lo == *v && self.hi == *v {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certain comparison of the enclosed value against an exact rational.
    pub fn compare_rational(&self, v: &Rational) -> Option<Ordering> {
        if self.hi < *v {
            Some(Ordering::Less)
        } else if self.lo > *v {
            Some(Ordering::Greater)
        } else if self.lo == *v && self.hi == *v {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        Self::raw(-self.hi.clone(), -self.lo.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        Self::raw(down(p, &self.lo + &other.lo), up(p, &self.hi + &other.hi))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        Self::raw(down(p, &self.lo - &other.hi), up(p, &self.hi - &other.lo))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.joint_prec(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a * b);
            let h = up(p, a * b);
            lo = Some(match lo {
                Some(cur) => min_f(cur, l),
                None => l,
            });
            hi = Some(match hi {
                Some(cur) => max_f(cur, h),
                None => h,
            });
        }
        Self::raw(lo.expect("four products"), hi.expect("four products"))
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        self.mul(&Interval::from_i64(v, self.prec()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Domain("division by an interval containing 0".into()));
        }
        let p = self.joint_prec(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let l = down(p, a / b);
            let h = up(p, a / b);
            lo = Some(match lo {
                Some(cur) => min_f(cur, l),
                None => l,
            });
            hi = Some(match hi {
                Some(cur) => max_f(cur, h),
                None => h,
            });
        }
        Ok(Self::raw(lo.expect("four quotients"), hi.expect("four quotients")))
    }

    pub fn div_i64(&self, v: i64) -> Result<Self> {
        self.div(&Interval::from_i64(v, self.prec()))
    }

    pub fn recip(&self) -> Result<Self> {
        Interval::from_i64(1, self.prec()).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("sqrt of interval with lo = {}", self.lo)));
        }
        let p = self.prec();
        Ok(Self::raw(down(p, self.lo.sqrt_ref()), up(p, self.hi.sqrt_ref())))
    }

    pub fn exp(&self) -> Result<Self> {
        let p = self.prec();
        let lo = down(p, self.lo.exp_ref());
        let hi = up(p, self.hi.exp_ref());
        if hi.is_infinite() {
            return Err(Error::Overflow("exp"));
        }
        Ok(Self::raw(lo, hi))
    }

    /// Integer power with the exact image of `x -> x^n` (zero-straddling aware).
    pub fn pow_i32(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.pow_i32(-n)?.recip();
        }
        if n == 0 {
            return Ok(Interval::from_i64(1, self.prec()));
        }
        let p = self.prec();
        let n_u = n as u32;
        let pow_dn = |x: &Float| down(p, x.pow(n_u));
        let pow_up = |x: &Float| up(p, x.pow(n_u));
        let out = if self.lo >= 0 || n % 2 == 1 {
            Self::raw(pow_dn(&self.lo), pow_up(&self.hi))
        } else if self.hi <= 0 {
            Self::raw(pow_dn(&self.hi), pow_up(&self.lo))
        } else {
            let m = max_f(Float::with_val(p, self.lo.abs_ref()), self.hi.clone());
            Self::raw(Float::new(p), pow_up(&m))
        };
        if out.hi.is_infinite() || out.lo.is_infinite() {
            return Err(Error::Overflow("pow"));
        }
        Ok(out)
    }

    fn lipschitz_trig(&self, f: impl Fn(&Float, Round) -> Float) -> Self {
        let p = self.prec();
        let mid = Float::with_val(p, &self.lo + &self.hi) / 2u32;
        let rad = max_f(up(p, &self.hi - &mid), up(p, &mid - &self.lo));
        let lo = down(p, f(&mid, Round::Down) - &rad);
        let hi = up(p, f(&mid, Round::Up) + &rad);
        let one = Float::with_val(p, 1);
        Self::raw(max_f(lo, -one.clone()), min_f(hi, one))
    }

    /// Enclosure of cos via the 1-Lipschitz bound around the midpoint.
    pub fn cos(&self) -> Self {
        let p = self.prec();
        self.lipschitz_trig(|x, r| Float::with_val_round(p, x.cos_ref(), r).0)
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        self.lipschitz_trig(|x, r| Float::with_val_round(p, x.sin_ref(), r).0)
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(
            min_f(self.lo.clone(), other.lo.clone()),
            max_f(self.hi.clone(), other.hi.clone()),
        )
    }

    /// Adds `[-r, r]` to the interval (`r >= 0` rounded up by the caller).
    pub fn widen(&self, r: &Float) -> Self {
        let p = self.prec();
        Self::raw(down(p, &self.lo - r), up(p, &self.hi + r))
    }

    /// `[0, hi]`-style enclosure union: `self + [0, r]`.
    pub fn add_tail(&self, r: &Float) -> Self {
        let p = self.prec();
        Self::raw(self.lo.clone(), up(p, &self.hi + r))
    }

    /// Same interval rounded outward to a different precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::raw(down(prec, &self.lo), up(prec, &self.hi))
    }

    /// Decimal rendering `"[lo,hi]"` with `digits` significant digits, rounded outward.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "[{},{}]",
            self.lo.to_string_radix_round(10, Some(digits), Round::Down),
            self.hi.to_string_radix_round(10, Some(digits), Round::Up)
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(25))
    }
}

/// Runs `attempt` at `start` bits, doubling up to `max` bits while it
/// reports an inconclusive (`None`) outcome.
pub fn escalate<T>(
    start: u32,
    max: u32,
    mut attempt: impl FnMut(u32) -> Result<Option<T>>,
) -> Result<T> {
    let mut prec = start.max(MIN_PRECISION);
    loop {
        if let Some(v) = attempt(prec)? {
            return Ok(v);
        }
        if prec >= max {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        prec = (prec * 2).min(max);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(x: &Interval, v: f64, tol: f64) -> bool {
        (x.to_f64() - v).abs() <= tol
    }

    #[test]
    fn pi_encloses_known_digits() {
        let pi = Interval::pi(128);
        let reference = Float::with_val(256, Constant::Pi);
        assert!(pi.contains_float(&reference));
        assert!(pi.to_decimal(30).starts_with("[3.14159265358979323846264338327"));
        assert!(pi.width() < Float::with_val(64, Float::i_exp(1, -120)));
    }

    #[test]
    fn sqrt_of_exact_square_is_exact() {
        let four = Interval::from_i64(4, 128);
        let r = four.sqrt().unwrap();
        assert_eq!(*r.lo(), 2);
        assert_eq!(*r.hi(), 2);
        assert!(Interval::from_i64(-1, 64).sqrt().is_err());
    }

    #[test]
    fn exp_one_encloses_e() {
        let e = Interval::from_i64(1, 192).exp().unwrap();
        let reference = Float::with_val(400, 1).exp();
        assert!(e.contains_float(&reference));
        assert!(approx(&e, std::f64::consts::E, 1e-15));
    }

    #[test]
    fn exp_overflow_is_an_error() {
        let huge = Interval::new(Float::with_val(64, 1), Float::with_val(64, Float::i_exp(1, 70))).unwrap();
        assert_eq!(huge.exp(), Err(Error::Overflow("exp")));
    }

    #[test]
    fn division_by_zero_straddling_interval_fails() {
        let a = Interval::from_i64(1, 64);
        let z = Interval::new(Float::with_val(64, -1), Float::with_val(64, 1)).unwrap();
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn mul_handles_signs() {
        let a = Interval::new(Float::with_val(64, -2), Float::with_val(64, 3)).unwrap();
        let b = Interval::new(Float::with_val(64, -5), Float::with_val(64, 1)).unwrap();
        let c = a.mul(&b);
        assert_eq!(*c.lo(), -15);
        assert_eq!(*c.hi(), 10);
    }

    #[test]
    fn even_power_of_straddling_interval_starts_at_zero() {
        let a = Interval::new(Float::with_val(64, -2), Float::with_val(64, 3)).unwrap();
        let sq = a.pow_i32(2).unwrap();
        assert_eq!(*sq.lo(), 0);
        assert_eq!(*sq.hi(), 9);
        let cube = a.pow_i32(3).unwrap();
        assert_eq!(*cube.lo(), -8);
        assert_eq!(*cube.hi(), 27);
        let inv = Interval::from_i64(2, 64).pow_i32(-3).unwrap();
        assert!(inv.contains_rational(&Rational::from((1, 8))));
    }

    #[test]
    fn trig_encloses_reference() {
        for num in [-7i64, -1, 0, 1, 3, 11, 100] {
            let x = Interval::from_ratio(num, 7, 160);
            let refx = Float::with_val(400, Rational::from((num, 7)));
            assert!(x.cos().contains_float(&Float::with_val(400, refx.cos_ref())));
            assert!(x.sin().contains_float(&Float::with_val(400, refx.sin_ref())));
        }
    }

    #[test]
    fn integer_comparisons() {
        let x = Interval::from_ratio(7, 2, 64);
        assert_eq!(x.compare_integer(&Integer::from(3)), Some(Ordering::Greater));
        assert_eq!(x.compare_integer(&Integer::from(4)), Some(Ordering::Less));
        let w = Interval::new(Float::with_val(64, 3), Float::with_val(64, 5)).unwrap();
        assert_eq!(w.compare_integer(&Integer::from(4)), None);
        assert_eq!(Interval::from_i64(4, 64).compare_integer(&Integer::from(4)), Some(Ordering::Equal));
    }

    #[test]
    fn escalation_doubles_until_decided() {
        let mut seen = Vec::new();
        let v = escalate(64, 1024, |p| {
            seen.push(p);
            Ok(if p >= 256 { Some(p) } else { None })
        })
        .unwrap();
        assert_eq!(v, 256);
        assert_eq!(seen, vec![64, 128, 256]);
        let err = escalate(64, 128, |_| Ok::<Option<()>, Error>(None));
        assert_eq!(err, Err(Error::PrecisionExhausted { bits: 128 }));
    }

    #[test]
    fn display_rounds_outward() {
        let third = Interval::from_ratio(1, 3, 128);
        let s = third.to_decimal(5);
        assert!(s.starts_with("[3.3333e-1,3.3334e-1]"), "{s}");
    }
}

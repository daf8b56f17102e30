//! Coefficient asymptotics for eta quotients `G(q) = prod (q^m; q^m)^delta`
//! in the `Delta_1 = 0` regime, and the certified brackets on p̄ₖ(n) built
//! from them.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bessel_i1, check_asymptotic_k, dedekind_sum, escalate, mu, Interval};
use crate::qseries::{build_spec, pk, EtaQuotientSpec};

/// Highest precision tried when a threshold comparison is inconclusive.
pub const MAX_PRECISION: u32 = 4096;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[derive(Debug, Clone)]
pub struct ChernInvariants {
    pub delta1: Rational,
    pub delta2: i64,
    /// Δ₃(l) for l = 1..=L, stored at index l-1.
    pub delta3: Vec<Rational>,
    /// Δ₄(l)², exact.
    pub delta4_sq: Vec<Rational>,
    pub delta4: Vec<Interval>,
    pub big_l: u64,
    /// The l in 1..=L with Δ₃(l) > 0.
    pub l_pos: Vec<u64>,
}

impl ChernInvariants {
    fn index(&self, l: u64) -> usize {
        ((l - 1) % self.big_l) as usize
    }

    /// Δ₃ at any positive integer; only `l mod L` matters.
    pub fn delta3_at(&self, l: u64) -> &Rational {
        &self.delta3[self.index(l)]
    }

    pub fn delta4_at(&self, l: u64) -> &Interval {
        &self.delta4[self.index(l)]
    }
}

/// Computes Δ₁..Δ₄, L and the positive set for `spec` (Δ₄ enclosed at `prec`).
pub fn invariants(spec: &EtaQuotientSpec, prec: u32) -> ChernInvariants {
    let f = spec.factors();
    let sum_delta: i64 = f.iter().map(|&(_, d)| d).sum();
    let delta1 = Rational::from((-sum_delta, 2));
    let delta2 = f.iter().map(|&(m, d)| m as i64 * d).sum();
    let big_l = f.iter().fold(1, |acc, &(m, _)| lcm(acc, m));
    let mut delta3 = Vec::with_capacity(big_l as usize);
    let mut delta4_sq = Vec::with_capacity(big_l as usize);
    for l in 1..=big_l {
        let mut d3 = Rational::new();
        let mut d4 = Rational::from(1);
        for &(m, d) in f {
            let g = gcd(m, l);
            d3 -= Rational::from((d * (g * g) as i64, m as i64));
            // (m/g)^(-d) contributes to the square of Δ₄
            let base = Integer::from(m / g);
            let pow = base.pow(d.unsigned_abs() as u32);
            if d > 0 {
                d4 /= Rational::from(pow);
            } else {
                d4 *= Rational::from(pow);
            }
        }
        delta3.push(d3);
        delta4_sq.push(d4);
    }
    let delta4 = delta4_sq
        .iter()
        .map(|s| Interval::from_rational(s, prec).sqrt().expect("positive square"))
        .collect();
    let l_pos = (1..=big_l).filter(|&l| delta3[(l - 1) as usize] > 0).collect();
    ChernInvariants { delta1, delta2, delta3, delta4_sq, delta4, big_l, l_pos }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub holds: bool,
    /// First l where `min_r gcd(m_r, l)^2 / m_r < Δ₃(l) / 24`.
    pub witness: Option<u64>,
}

/// Checks `min_r gcd²(m_r, l)/m_r >= Δ₃(l)/24` for every `1 <= l <= L`.
pub fn check_admissibility(spec: &EtaQuotientSpec) -> Admissibility {
    let inv = invariants(spec, 64);
    for l in 1..=inv.big_l {
        let min = spec
            .factors()
            .iter()
            .map(|&(m, _)| {
                let g = gcd(m, l);
                Rational::from(((g * g) as i64, m as i64))
            })
            .min()
            .expect("non-empty spec");
        if min < Rational::from(inv.delta3_at(l) / 24u32) {
            return Admissibility { holds: false, witness: Some(l) };
        }
    }
    Admissibility { holds: true, witness: None }
}

/// Phase (in units of π, reduced to [0, 2)) of the `h`-th summand of Â_kk(n).
fn a_hat_phase(spec: &EtaQuotientSpec, kk: u64, n: u64, h: u64) -> Result<Rational> {
    let mut theta = Rational::from((-2 * Integer::from(n) * h, Integer::from(kk)));
    for &(m, d) in spec.factors() {
        let g = gcd(m, kk);
        let s = dedekind_sum((m / g * h) as i64, kk / g)?;
        theta -= s * d;
    }
    let two = Rational::from(2);
    let q = Rational::from(&theta / &two).floor();
    Ok(theta - q * two)
}

/// Enclosures of the real and imaginary parts of Â_kk(n).
#[derive(Debug, Clone, Serialize)]
pub struct AHat {
    pub re: Interval,
    pub im: Interval,
}

/// `Â_kk(n) = sum_{0<=h<kk, gcd(h,kk)=1} exp(-2πinh/kk - πi sum_r δ_r s(m_r h/g_r, kk/g_r))`.
pub fn a_hat(kk: u64, n: u64, spec: &EtaQuotientSpec, prec: u32) -> Result<AHat> {
    if kk == 0 {
        return Err(Error::Domain("Â needs kk >= 1".into()));
    }
    let pi = Interval::pi(prec);
    let mut re = Interval::from_i64(0, prec);
    let mut im = Interval::from_i64(0, prec);
    for h in 0..kk {
        if gcd(h, kk) != 1 {
            continue;
        }
        let theta = a_hat_phase(spec, kk, n, h)?;
        if theta == 0 {
            re = re.add(&Interval::from_i64(1, prec));
            continue;
        }
        if theta == 1 {
            re = re.sub(&Interval::from_i64(1, prec));
            continue;
        }
        let x = pi.mul(&Interval::from_rational(&theta, prec));
        re = re.add(&x.cos());
        im = im.add(&x.sin());
    }
    Ok(AHat { re, im })
}

fn require_delta1_zero(inv: &ChernInvariants) -> Result<()> {
    if inv.delta1 != 0 {
        return Err(Error::UnsupportedBranch(format!(
            "only Delta_1 = 0 is implemented, got {}",
            inv.delta1
        )));
    }
    Ok(())
}

fn shifted_weight(inv: &ChernInvariants, n: u64) -> Result<i64> {
    let x = 24 * n as i64 + inv.delta2;
    if x <= 0 {
        return Err(Error::Precondition(format!("need 24n + Delta_2 > 0, got {x}")));
    }
    Ok(x)
}

/// Truncated Bessel sum over `1 <= kk < big_n`: the approximation to g(n)
/// whose error is bounded by [`chern_error_bound`]. Only real parts of Â
/// are summed since g(n) is real.
pub fn chern_partial_sum(spec: &EtaQuotientSpec, n: u64, big_n: u64, prec: u32) -> Result<Interval> {
    let inv = invariants(spec, prec);
    require_delta1_zero(&inv)?;
    let x = Interval::from_i64(shifted_weight(&inv, n)?, prec);
    let pi = Interval::pi(prec);
    let mut total = Interval::from_i64(0, prec);
    for &l in &inv.l_pos {
        let d3 = Interval::from_rational(inv.delta3_at(l), prec);
        let pref = pi.mul_i64(2).mul(inv.delta4_at(l)).mul(&d3.div(&x)?.sqrt()?);
        let arg0 = pi.mul(&d3.mul(&x).sqrt()?).div_i64(6)?;
        let mut inner = Interval::from_i64(0, prec);
        let mut kk = l;
        while kk < big_n {
            let a = a_hat(kk, n, spec, prec)?;
            let arg = arg0.div_i64(kk as i64)?;
            inner = inner.add(&bessel_i1(&arg)?.div_i64(kk as i64)?.mul(&a.re));
            kk += inv.big_l;
        }
        total = total.add(&pref.mul(&inner));
    }
    Ok(total)
}

/// Upper bound on |E(n)| for the partial sum with parameter `big_n` (Ξ = 1).
pub fn chern_error_bound(spec: &EtaQuotientSpec, n: u64, big_n: u64, prec: u32) -> Result<Interval> {
    let inv = invariants(spec, prec);
    require_delta1_zero(&inv)?;
    if big_n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let pi = Interval::pi(prec);
    let nn = Interval::from_i64(big_n as i64, prec);
    let n_sq = nn.mul(&nn);
    let shifted = Interval::from_i64(shifted_weight(&inv, n)?, prec).div_i64(24)?;
    let growth = pi.mul_i64(2).mul(&shifted).div(&n_sq)?.exp()?;

    let mut pos3 = Interval::from_i64(0, prec);
    let mut pos24 = Interval::from_i64(0, prec);
    for &l in &inv.l_pos {
        let d3 = Interval::from_rational(inv.delta3_at(l), prec);
        pos3 = pos3.add(&inv.delta4_at(l).mul(&d3.mul(&pi).div_i64(3)?.exp()?));
        pos24 = pos24.add(&inv.delta4_at(l).mul(&d3.mul(&pi).div_i64(24)?.exp()?));
    }
    let first = n_sq.div(&pi.mul(&shifted))?.mul(&growth).mul(&pos3);

    let mut all = Interval::from_i64(0, prec);
    for l in 1..=inv.big_l {
        let d3 = Interval::from_rational(inv.delta3_at(l), prec);
        let mut e = d3.mul(&pi).div_i64(24)?;
        for &(m, d) in spec.factors() {
            let g = gcd(m, l);
            let t = pi.mul(&Interval::from_ratio((g * g) as i64, m as i64, prec)).neg().exp()?;
            let one_minus = Interval::from_i64(1, prec).sub(&t);
            e = e.add(&t.mul_i64(d.abs()).div(&one_minus.mul(&one_minus))?);
        }
        all = all.add(&inv.delta4_at(l).mul(&e.exp()?));
    }
    let second = growth.mul_i64(2).mul(&all.sub(&pos24));
    Ok(first.add(&second))
}

/// Standard truncation N = ⌊μₖ(n)⌋.
pub fn default_truncation(k: u32, n: u64) -> Result<u64> {
    let m = mu(k, n, 128)?.value;
    let lo = m.lo().to_integer_round(rug::float::Round::Down).expect("finite").0;
    let hi = m.hi().to_integer_round(rug::float::Round::Down).expect("finite").0;
    if lo != hi {
        return Err(Error::PrecisionExhausted { bits: 128 });
    }
    lo.to_u64().ok_or(Error::Overflow("truncation parameter"))
}

fn checked_invariants(k: u32, prec: u32) -> Result<ChernInvariants> {
    check_asymptotic_k(k)?;
    let inv = invariants(&build_spec(k)?, prec);
    require_delta1_zero(&inv)?;
    Ok(inv)
}

/// Main-term coefficient `2π Δ₄(1) sqrt(Δ₃(1) / (24n + Δ₂))` read off the
/// l = 1, kk = 1 summand.
pub fn main_coefficient(k: u32, n: u64, prec: u32) -> Result<Interval> {
    if n == 0 {
        return Err(Error::Domain("main term needs n >= 1".into()));
    }
    let inv = checked_invariants(k, prec)?;
    let x = Interval::from_i64(shifted_weight(&inv, n)?, prec);
    let d3 = Interval::from_rational(inv.delta3_at(1), prec);
    Ok(Interval::pi(prec).mul_i64(2).mul(inv.delta4_at(1)).mul(&d3.div(&x)?.sqrt()?))
}

/// Closed form `π² (k-1) / (2k sqrt(k) μₖ(n))` of [`main_coefficient`].
pub fn main_coefficient_closed_form(k: u32, n: u64, prec: u32) -> Result<Interval> {
    let m = mu(k, n, prec)?.value;
    let pi = Interval::pi(prec);
    let kk = i64::from(k);
    let den = Interval::from_i64(kk, prec).sqrt()?.mul_i64(2 * kk).mul(&m);
    pi.mul(&pi).mul_i64(kk - 1).div(&den)
}

/// Squares of `C_k(n) μₖ / π²` as printed in the published coefficient table.
const PRINTED_C_SQ: [(i64, i64); 8] = [
    (1, 8),
    (4, 27),
    (9, 16),
    (64, 125),
    (25, 54),
    (324, 343),
    (49, 32),
    (64, 81),
];

/// The published table's `C_k(n)`. It exceeds [`main_coefficient`] by the
/// factor `|L_pos|` and is kept for comparison only.
pub fn printed_main_coefficient(k: u32, n: u64, prec: u32) -> Result<Interval> {
    let (a, b) = PRINTED_C_SQ[check_asymptotic_k(k)?];
    let m = mu(k, n, prec)?.value;
    let pi = Interval::pi(prec);
    pi.mul(&pi).mul(&Interval::from_ratio(a, b, prec).sqrt()?).div(&m)
}

/// `M_k(n) = C_k(n) I₁(μₖ(n))`.
pub fn main_term(k: u32, n: u64, prec: u32) -> Result<Interval> {
    let c = main_coefficient(k, n, prec)?;
    Ok(c.mul(&bessel_i1(&mu(k, n, prec)?.value)?))
}

/// Validity thresholds on μₖ for the remainder bound.
pub const REMAINDER_THRESHOLDS: [u64; 8] = [22, 49, 41, 58, 130, 102, 129, 268];

/// Validity thresholds on μₖ for the relative bracket `M (1 -+ μ^-6)`.
pub const RELATIVE_THRESHOLDS: [u64; 8] = [43, 49, 43, 58, 130, 102, 129, 268];

/// `R'_k(n) = sqrt(a/b) π^{3/2} / sqrt(μ) exp(μ/d)`, stored as (a, b, d).
const REMAINDER_TABLE: [(i64, i64, i64); 8] = [
    (3, 4, 3),
    (160, 243, 5),
    (27, 8, 3),
    (6144, 3125, 3),
    (500, 243, 5),
    (489_888, 117_649, 3),
    (147, 16, 3),
    (2560, 729, 5),
];

pub fn remainder_threshold(k: u32) -> Result<u64> {
    Ok(REMAINDER_THRESHOLDS[check_asymptotic_k(k)?])
}

pub fn relative_threshold(k: u32) -> Result<u64> {
    Ok(RELATIVE_THRESHOLDS[check_asymptotic_k(k)?])
}

/// Whether μₖ(n) >= t, escalating precision until the comparison is definite.
pub fn mu_at_least(k: u32, n: u64, t: u64) -> Result<bool> {
    escalate(128, MAX_PRECISION, |p| {
        let m = mu(k, n, p)?.value;
        Ok(match m.compare_integer(&Integer::from(t)) {
            Some(Ordering::Less) => Some(false),
            Some(_) => Some(true),
            None => None,
        })
    })
}

/// Smallest n with μₖ(n) >= t.
pub fn first_n_with_mu_at_least(k: u32, t: u64) -> Result<u64> {
    check_asymptotic_k(k)?;
    let frac = 1.0 - 1.0 / f64::from(k);
    let guess = ((t as f64 / std::f64::consts::PI).powi(2) / frac).floor() as u64;
    let mut n = guess.saturating_sub(2);
    while n > 0 && mu_at_least(k, n, t)? {
        n -= 1;
    }
    while !mu_at_least(k, n, t)? {
        n += 1;
    }
    Ok(n)
}

fn require_mu(k: u32, n: u64, t: u64, what: &'static str) -> Result<()> {
    if mu_at_least(k, n, t)? {
        Ok(())
    } else {
        Err(Error::BelowThreshold {
            what,
            k,
            unit: "mu",
            threshold: t,
            actual: format!("n = {n}"),
        })
    }
}

/// R'_k(n); requires μₖ(n) >= nₖ.
pub fn remainder_bound(k: u32, n: u64, prec: u32) -> Result<Interval> {
    let (a, b, d) = REMAINDER_TABLE[check_asymptotic_k(k)?];
    require_mu(k, n, REMAINDER_THRESHOLDS[(k - 2) as usize], "remainder bound")?;
    let m = mu(k, n, prec)?.value;
    let pi = Interval::pi(prec);
    let pi_32 = pi.mul(&pi.sqrt()?);
    let c = Interval::from_ratio(a, b, prec).sqrt()?;
    Ok(c.mul(&pi_32).div(&m.sqrt()?)?.mul(&m.div_i64(d)?.exp()?))
}

/// `(M (1 - μ^-6), M (1 + μ^-6))`; requires μₖ(n) >= ṅₖ.
pub fn pk_bounds(k: u32, n: u64, prec: u32) -> Result<(Interval, Interval)> {
    check_asymptotic_k(k)?;
    require_mu(k, n, RELATIVE_THRESHOLDS[(k - 2) as usize], "relative bracket")?;
    let m = mu(k, n, prec)?.value;
    let main = main_term(k, n, prec)?;
    let eps = m.pow_i32(-6)?;
    let one = Interval::from_i64(1, prec);
    Ok((main.mul(&one.sub(&eps)), main.mul(&one.add(&eps))))
}

/// How the two certified brackets nest at one n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BracketRelation {
    /// `R' < M / μ⁶`: the remainder bracket is the narrower one.
    RemainderInsideRelative,
    /// `M / μ⁶ < R'`.
    RelativeInsideRemainder,
    Undecided,
}

/// Compares `R'_k(n)` with `M_k(n) / μ⁶`; needs both brackets to apply.
pub fn bracket_relation(k: u32, n: u64, prec: u32) -> Result<BracketRelation> {
    let r = remainder_bound(k, n, prec)?;
    let (lo, hi) = pk_bounds(k, n, prec)?;
    let half_width = hi.sub(&lo).div_i64(2)?;
    Ok(match r.compare(&half_width) {
        Some(Ordering::Less) => BracketRelation::RemainderInsideRelative,
        Some(Ordering::Greater) => BracketRelation::RelativeInsideRemainder,
        _ => BracketRelation::Undecided,
    })
}

/// Containment of an exact integer in a two-sided interval bracket.
fn contains(lower: &Interval, upper: &Interval, v: &Integer) -> Option<bool> {
    let above = lower.compare_integer(v)?;
    let below = upper.compare_integer(v)?;
    Some(above != Ordering::Greater && below != Ordering::Less)
}

/// One row of the asymptotic comparison.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticEstimate {
    pub k: u32,
    pub n: u64,
    pub mu: Interval,
    pub main: Interval,
    /// `None` below the remainder threshold.
    pub remainder_bound: Option<Interval>,
    /// Relative bracket, `None` below its threshold.
    pub lower: Option<Interval>,
    pub upper: Option<Interval>,
    #[serde(serialize_with = "ser_integer")]
    pub exact: Integer,
    pub inside_remainder: Option<bool>,
    pub inside_relative: Option<bool>,
}

fn ser_integer<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn below_threshold_as_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BelowThreshold { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn estimate_at(k: u32, n: u64, prec: u32, exact: &Integer) -> Result<Option<AsymptoticEstimate>> {
    let m = mu(k, n, prec)?.value;
    let main = main_term(k, n, prec)?;
    let remainder = below_threshold_as_none(remainder_bound(k, n, prec))?;
    let rel = below_threshold_as_none(pk_bounds(k, n, prec))?;
    let inside_remainder = match &remainder {
        Some(r) => match contains(&main.sub(r), &main.add(r), exact) {
            Some(v) => Some(v),
            None => return Ok(None),
        },
        None => None,
    };
    let inside_relative = match &rel {
        Some((lo, hi)) => match contains(lo, hi, exact) {
            Some(v) => Some(v),
            None => return Ok(None),
        },
        None => None,
    };
    let (lower, upper) = rel.map_or((None, None), |(l, u)| (Some(l), Some(u)));
    Ok(Some(AsymptoticEstimate {
        k,
        n,
        mu: m,
        main,
        remainder_bound: remainder,
        lower,
        upper,
        exact: exact.clone(),
        inside_remainder,
        inside_relative,
    }))
}

/// Evaluates both brackets against the exact p̄ₖ(n), raising precision from
/// `prec` up to `max_prec` until every containment verdict is definite.
pub fn estimate(k: u32, n: u64, prec: u32, max_prec: u32) -> Result<AsymptoticEstimate> {
    let exact = pk(k, n as usize)?;
    escalate(prec, max_prec, |p| estimate_at(k, n, p, &exact))
}

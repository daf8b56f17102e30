//! Exact truncated power series over the integers and the eta-quotient
//! generating function of k-regular overpartitions.
//!
//! Every Euler product (q^m; q^m)_inf is expanded sparsely from the
//! pentagonal number theorem, and all products and quotients against such
//! factors skip zero coefficients, so building the series for p̄ₖ(n) up to
//! order N costs O(N^1.5) big-integer additions.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rug::{Assign, Integer};

use crate::error::{Error, Result};

/// Truncated power series `sum_{n <= N} c_n q^n` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<Integer>,
}

impl IntegerSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    ///
    /// An empty vector is treated as the zero series of order 0.
    pub fn from_coeffs(mut coeffs: Vec<Integer>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Integer::new());
        }
        IntegerSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        IntegerSeries {
            coeffs: vec![Integer::new(); order + 1],
        }
    }

    /// The unit series `1 + 0 q + ... + 0 q^order`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Integer::from(1);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&Integer> {
        self.coeffs.get(n)
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    /// Drops every coefficient above `order` (no-op if already shorter).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    fn nonzero_terms(&self) -> Vec<(usize, &Integer)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        // Walk the sparser operand's non-zero entries.
        let (sparse, dense) = if self.nonzero_terms().len() <= other.nonzero_terms().len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::zero(order);
        for (i, a) in sparse.nonzero_terms() {
            for (j, b) in dense.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor` by forward substitution.
    ///
    /// The divisor must have constant term 1; cost is O(order * nnz(divisor)).
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        self.check_order(divisor)?;
        if divisor.coeffs[0] != 1 {
            return Err(Error::NonUnitConstant(divisor.coeffs[0].to_string()));
        }
        let tail: Vec<(usize, &Integer)> = divisor
            .nonzero_terms()
            .into_iter()
            .filter(|&(i, _)| i > 0)
            .collect();
        let mut out: Vec<Integer> = Vec::with_capacity(self.coeffs.len());
        let mut acc = Integer::new();
        for n in 0..self.coeffs.len() {
            acc.assign(&self.coeffs[n]);
            for &(i, d) in &tail {
                if i > n {
                    break;
                }
                acc -= d * &out[n - i];
            }
            out.push(acc.clone());
        }
        Ok(IntegerSeries { coeffs: out })
    }

    /// Multiplicative inverse; requires constant term 1.
    pub fn invert(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }
}

/// `(q^m; q^m)_inf` truncated at `order`, via the pentagonal number theorem:
/// `prod_j (1 - q^{mj}) = sum_j (-1)^j q^{m j (3j - 1) / 2}` over all integers j.
///
/// Panics if `m == 0`.
pub fn euler_series(m: u64, order: usize) -> IntegerSeries {
    assert!(m >= 1, "Euler product needs m >= 1");
    let mut s = IntegerSeries::zero(order);
    s.coeffs[0] = Integer::from(1);
    let limit = order as u64;
    let mut j: u64 = 1;
    loop {
        // generalized pentagonal numbers j(3j-1)/2 and j(3j+1)/2
        let p1 = j * (3 * j - 1) / 2;
        let p2 = j * (3 * j + 1) / 2;
        let e1 = p1.checked_mul(m);
        match e1 {
            Some(e) if e <= limit => {}
            _ => break,
        }
        let sign: i32 = if j % 2 == 1 { -1 } else { 1 };
        for p in [p1, p2] {
            if let Some(e) = p.checked_mul(m) {
                if e <= limit {
                    s.coeffs[e as usize] += sign;
                }
            }
        }
        j += 1;
    }
    s
}

/// Exponent data of `prod_r (q^{m_r}; q^{m_r})_inf^{delta_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(u64, i64)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("eta quotient needs at least one factor".into()));
        }
        if let Some(&(m, _)) = factors.iter().find(|(m, _)| *m == 0) {
            return Err(Error::Precondition(format!("factor modulus m = {m} must be >= 1")));
        }
        Ok(EtaQuotientSpec { factors })
    }

    /// `(m_r, delta_r)` pairs in declaration order.
    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    pub fn moduli(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(m, _)| m)
    }

    /// Coefficients of the eta quotient up to `order`.
    pub fn series(&self, order: usize) -> IntegerSeries {
        let mut acc = IntegerSeries::one(order);
        // multiply first so intermediate values stay small
        for &(m, d) in self.factors.iter().filter(|(_, d)| *d > 0) {
            let e = euler_series(m, order);
            for _ in 0..d {
                acc = acc.mul(&e).expect("orders agree");
            }
        }
        for &(m, d) in self.factors.iter().filter(|(_, d)| *d < 0) {
            let e = euler_series(m, order);
            for _ in 0..(-d) {
                acc = acc.div(&e).expect("Euler series has unit constant term");
            }
        }
        acc
    }

    /// `(numerator, denominator)` series, both products of Euler factors.
    pub fn split_series(&self, order: usize) -> (IntegerSeries, IntegerSeries) {
        let mut num = IntegerSeries::one(order);
        let mut den = IntegerSeries::one(order);
        for &(m, d) in &self.factors {
            let e = euler_series(m, order);
            let target = if d > 0 { &mut num } else { &mut den };
            for _ in 0..d.unsigned_abs() {
                *target = target.mul(&e).expect("orders agree");
            }
        }
        (num, den)
    }
}

/// Eta-quotient data for the k-regular overpartition generating function.
///
/// `(q^k;q^k)(-q;q) / ((q;q)(-q^k;q^k))` becomes
/// `(q^2;q^2)(q^k;q^k)^2 / ((q;q)^2 (q^{2k};q^{2k}))` after
/// `(-q^a;q^a)_inf = (q^{2a};q^{2a})_inf / (q^a;q^a)_inf`.
pub fn build_spec(k: u32) -> Result<EtaQuotientSpec> {
    if k < 2 {
        return Err(Error::InvalidK { k, min: 2 });
    }
    let k = u64::from(k);
    EtaQuotientSpec::new(vec![(1, -2), (2, 1), (k, 2), (2 * k, -1)])
}

/// Series of p̄ₖ(n) for `0 <= n <= order`.
pub fn pk_series(k: u32, order: usize) -> Result<IntegerSeries> {
    Ok(build_spec(k)?.series(order))
}

/// Read-mostly cache of p̄ₖ series, one per k, grown geometrically.
#[derive(Debug, Default)]
pub struct SeriesCache {
    inner: RwLock<HashMap<u32, Arc<IntegerSeries>>>,
}

impl SeriesCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Series for `k` covering at least `order`; shared and immutable.
    pub fn series(&self, k: u32, order: usize) -> Result<Arc<IntegerSeries>> {
        if k < 2 {
            return Err(Error::InvalidK { k, min: 2 });
        }
        if let Some(s) = self.inner.read().expect("cache poisoned").get(&k) {
            if s.order() >= order {
                return Ok(Arc::clone(s));
            }
        }
        let mut guard = self.inner.write().expect("cache poisoned");
        let current = guard.get(&k).map(|s| s.order());
        if let (Some(cur), Some(s)) = (current, guard.get(&k)) {
            if cur >= order {
                return Ok(Arc::clone(s));
            }
        }
        let target = match current {
            Some(cur) => order.max(cur.saturating_mul(2)),
            None => order.max(64),
        };
        let fresh = Arc::new(pk_series(k, target)?);
        guard.insert(k, Arc::clone(&fresh));
        Ok(fresh)
    }

    pub fn pk(&self, k: u32, n: usize) -> Result<Integer> {
        Ok(self.series(k, n)?.coeffs[n].clone())
    }
}

fn global_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(SeriesCache::new)
}

/// Exact p̄ₖ(n), memoized process-wide.
pub fn pk(k: u32, n: usize) -> Result<Integer> {
    global_cache().pk(k, n)
}

/// Shared p̄ₖ series covering at least `order`, from the process-wide cache.
pub fn pk_cached_series(k: u32, order: usize) -> Result<Arc<IntegerSeries>> {
    global_cache().series(k, order)
}

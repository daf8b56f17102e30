//! Overpartitions as explicit objects, constrained enumeration, and the
//! injections used in the combinatorial proof of log-subadditivity.

mod maps;
mod verify;

use std::fmt;

use rug::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use maps::{f1_map, f2_map, f3_map, F1Variant};
pub use verify::{verify_lemma, Lemma, VerificationMode, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Part {
    pub size: u32,
    pub overlined: bool,
}

impl Part {
    pub fn plain(size: u32) -> Self {
        Part { size, overlined: false }
    }

    pub fn over(size: u32) -> Self {
        Part { size, overlined: true }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.overlined {
            write!(f, "{}\u{0305}", self.size)
        } else {
            write!(f, "{}", self.size)
        }
    }
}

/// Parts in non-increasing size; the overlined copy of a size (if any)
/// comes first among its equals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Overpartition {
    parts: Vec<(std::cmp::Reverse<u32>, std::cmp::Reverse<bool>)>,
    weight: u64,
}

impl Overpartition {
    pub fn empty() -> Self {
        Overpartition { parts: Vec::new(), weight: 0 }
    }

    /// Sorts `parts` into canonical order; fails on a zero part or on two
    /// overlined copies of the same size.
    pub fn new(parts: impl IntoIterator<Item = Part>) -> Result<Self> {
        let mut v: Vec<_> = parts
            .into_iter()
            .map(|p| (std::cmp::Reverse(p.size), std::cmp::Reverse(p.overlined)))
            .collect();
        v.sort_unstable();
        let mut weight = 0u64;
        for (idx, &(std::cmp::Reverse(size), std::cmp::Reverse(over))) in v.iter().enumerate() {
            if size == 0 {
                return Err(Error::Domain("parts must be positive".into()));
            }
            if over && idx > 0 && v[idx - 1] == (std::cmp::Reverse(size), std::cmp::Reverse(true)) {
                return Err(Error::Domain(format!("size {size} is overlined twice")));
            }
            weight += u64::from(size);
        }
        Ok(Overpartition { parts: v, weight })
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl DoubleEndedIterator<Item = Part> + ExactSizeIterator + '_ {
        self.parts
            .iter()
            .map(|&(std::cmp::Reverse(size), std::cmp::Reverse(overlined))| Part { size, overlined })
    }

    pub fn part(&self, idx: usize) -> Option<Part> {
        self.parts
            .get(idx)
            .map(|&(std::cmp::Reverse(size), std::cmp::Reverse(overlined))| Part { size, overlined })
    }

    pub fn to_vec(&self) -> Vec<Part> {
        self.parts().collect()
    }

    /// Number of non-overlined copies of `size`.
    pub fn plain_count(&self, size: u32) -> usize {
        self.parts().filter(|p| p.size == size && !p.overlined).count()
    }

    pub fn has_overlined(&self, size: u32) -> bool {
        self.parts().any(|p| p.size == size && p.overlined)
    }

    pub fn satisfies(&self, c: &Constraint) -> bool {
        self.parts().all(|p| c.allows(p))
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Overpartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Restrictions on overpartitions. "No j's" forbids non-overlined copies
/// of j only; the overlined j̄ stays allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Constraint {
    pub k_regular: Option<u32>,
    pub forbid_ones: bool,
    pub forbid_twos: bool,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn regular(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK { k, min: 2 });
        }
        Ok(Constraint { k_regular: Some(k), ..Self::default() })
    }

    pub fn no_ones(mut self) -> Self {
        self.forbid_ones = true;
        self
    }

    pub fn no_twos(mut self) -> Self {
        self.forbid_twos = true;
        self
    }

    pub fn allows_size(&self, size: u32) -> bool {
        self.k_regular.is_none_or(|k| !size.is_multiple_of(k))
    }

    pub fn allows_plain(&self, size: u32) -> bool {
        self.allows_size(size) && !(self.forbid_ones && size == 1) && !(self.forbid_twos && size == 2)
    }

    pub fn allows(&self, p: Part) -> bool {
        if p.overlined {
            self.allows_size(p.size)
        } else {
            self.allows_plain(p.size)
        }
    }
}

/// Calls `visit` once for every overpartition of `n` satisfying `c`.
pub fn for_each(n: u64, c: &Constraint, mut visit: impl FnMut(&Overpartition)) {
    fn rec(
        remaining: u64,
        max_size: u64,
        c: &Constraint,
        parts: &mut Vec<Part>,
        visit: &mut dyn FnMut(&Overpartition),
    ) {
        if remaining == 0 {
            let o = Overpartition::new(parts.iter().copied()).expect("generated parts are canonical");
            visit(&o);
            return;
        }
        for size in (1..=max_size.min(remaining)).rev() {
            let s = size as u32;
            if !c.allows_size(s) {
                continue;
            }
            let plain_ok = c.allows_plain(s);
            for over in [true, false] {
                let base = parts.len();
                let mut used = 0;
                if over {
                    parts.push(Part::over(s));
                    used = size;
                }
                let max_plain = if plain_ok { (remaining - used) / size } else { 0 };
                for copies in 0..=max_plain {
                    if !over && copies == 0 {
                        continue;
                    }
                    parts.truncate(base + usize::from(over));
                    parts.extend(std::iter::repeat_n(Part::plain(s), copies as usize));
                    rec(remaining - used - copies * size, size - 1, c, parts, visit);
                }
                parts.truncate(base);
            }
        }
    }
    let mut parts = Vec::new();
    rec(n, n, c, &mut parts, &mut visit);
}

/// All overpartitions of `n` satisfying `c`, in canonical sorted order.
pub fn enumerate(n: u64, c: &Constraint) -> Vec<Overpartition> {
    let mut out = Vec::new();
    for_each(n, c, |o| out.push(o.clone()));
    out.sort();
    out
}

/// Number of overpartitions of `n` satisfying `c`, by a product-form
/// dynamic program (independent of [`for_each`]).
pub fn count(n: u64, c: &Constraint) -> Integer {
    let n = n as usize;
    let mut dp = vec![Integer::new(); n + 1];
    dp[0] = Integer::from(1);
    for size in 1..=n {
        let s = size as u32;
        if !c.allows_size(s) {
            continue;
        }
        // overlined copy: (1 + q^s)
        for w in (size..=n).rev() {
            let add = dp[w - size].clone();
            dp[w] += add;
        }
        if c.allows_plain(s) {
            // plain copies: 1 / (1 - q^s)
            for w in size..=n {
                let add = dp[w - size].clone();
                dp[w] += add;
            }
        }
    }
    dp.swap_remove(n)
}

/// Pair of overpartitions produced by the injections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SplitPair {
    pub left: Overpartition,
    pub right: Overpartition,
}

impl fmt::Display for SplitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.left, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::pk;

    #[test]
    fn canonical_order_and_validation() {
        let o = Overpartition::new([Part::plain(1), Part::plain(3), Part::over(3), Part::over(1)]).unwrap();
        assert_eq!(o.to_vec(), vec![Part::over(3), Part::plain(3), Part::over(1), Part::plain(1)]);
        assert_eq!(o.weight(), 8);
        assert!(Overpartition::new([Part::over(2), Part::over(2)]).is_err());
        assert!(Overpartition::new([Part::plain(0)]).is_err());
        assert_eq!(o.to_string(), "(3\u{0305},3,1\u{0305},1)");
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(0, &Constraint::none()), vec![Overpartition::empty()]);
        let one = enumerate(1, &Constraint::none());
        assert_eq!(one.len(), 2);
        let two = enumerate(2, &Constraint::regular(2).unwrap());
        assert_eq!(two.len(), 2);
        // overpartition numbers 1, 2, 4, 8, 14, 24, 40, 64, 100
        let known = [1u64, 2, 4, 8, 14, 24, 40, 64, 100];
        for (n, &v) in known.iter().enumerate() {
            assert_eq!(enumerate(n as u64, &Constraint::none()).len() as u64, v);
            assert_eq!(count(n as u64, &Constraint::none()), v);
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_and_valid() {
        let c = Constraint::regular(3).unwrap().no_twos();
        for n in 0..=14 {
            let all = enumerate(n, &c);
            let set: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            assert!(all.iter().all(|o| o.weight() == n && o.satisfies(&c)));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn enumeration_matches_series_for_regular_constraint() {
        for k in 2..=9u32 {
            for n in 0..=16u64 {
                let c = Constraint::regular(k).unwrap();
                let e = enumerate(n, &c).len();
                assert_eq!(Integer::from(e), pk(k, n as usize).unwrap(), "k={k} n={n}");
                assert_eq!(count(n, &c), e);
            }
        }
    }

    #[test]
    fn removing_a_plain_two_is_a_bijection() {
        // p̄ₖ(n) = p̄ₖ(n | no 2's) + p̄ₖ(n - 2), which pins down "no 2's"
        for k in 3..=9u32 {
            for n in 2..=20u64 {
                let all = count(n, &Constraint::regular(k).unwrap());
                let no2 = count(n, &Constraint::regular(k).unwrap().no_twos());
                let rest = count(n - 2, &Constraint::regular(k).unwrap());
                assert_eq!(all, no2 + rest, "k={k} n={n}");
            }
        }
        for k in 2..=9u32 {
            for n in 1..=20u64 {
                let all = count(n, &Constraint::regular(k).unwrap());
                let no1 = count(n, &Constraint::regular(k).unwrap().no_ones());
                let rest = count(n - 1, &Constraint::regular(k).unwrap());
                assert_eq!(all, no1 + rest, "k={k} n={n}");
            }
        }
    }
}

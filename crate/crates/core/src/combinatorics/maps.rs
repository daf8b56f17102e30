use serde::Serialize;

use super::{Constraint, Overpartition, Part, SplitPair};
use crate::error::{Error, Result};

fn ones(x: u64) -> impl Iterator<Item = Part> {
    std::iter::repeat_n(Part::plain(1), x as usize)
}

fn twos(x: u64) -> impl Iterator<Item = Part> {
    std::iter::repeat_n(Part::plain(2), x as usize)
}

fn pair(left: Vec<Part>, right: Vec<Part>) -> Result<SplitPair> {
    Ok(SplitPair { left: Overpartition::new(left)?, right: Overpartition::new(right)? })
}

/// Splits λ into (parts > 1, whether 1̄ occurs, number of plain 1's).
fn split_ones(lambda: &Overpartition) -> (Vec<Part>, bool, u64) {
    let mut big = Vec::new();
    let (mut r, mut s) = (false, 0);
    for p in lambda.parts() {
        match (p.size, p.overlined) {
            (1, true) => r = true,
            (1, false) => s += 1,
            _ => big.push(p),
        }
    }
    (big, r, s)
}

fn require(lambda: &Overpartition, c: &Constraint, min_weight: u64, what: &str) -> Result<()> {
    if !lambda.satisfies(c) {
        return Err(Error::Precondition(format!("{lambda} is outside the domain of {what}")));
    }
    if lambda.weight() < min_weight {
        return Err(Error::Precondition(format!("{what} needs weight >= {min_weight}, got {lambda}")));
    }
    Ok(())
}

/// Removes one unit of weight: λ ∈ P̄ₖ(a+1 | no 2's) ↦ P̄ₖ(a | no 2's) ⊕ P̄ₖ(1).
pub fn f2_map(lambda: &Overpartition, k: u32) -> Result<SplitPair> {
    require(lambda, &Constraint::regular(k)?.no_twos(), 1, "f2")?;
    let (mut big, r, s) = split_ones(lambda);
    let bar1 = || Part::over(1);
    if s >= 1 {
        big.extend(r.then(bar1));
        big.extend(ones(s - 1));
        return pair(big, vec![Part::plain(1)]);
    }
    if r {
        return pair(big, vec![bar1()]);
    }
    let last = big.pop().expect("weight >= 1 without ones has a larger part");
    let n = u64::from(last.size);
    if last.overlined {
        big.push(bar1());
        big.extend(ones(n - 2));
    } else {
        big.extend(ones(n - 1));
    }
    pair(big, vec![bar1()])
}

/// Removes two units of weight: λ ∈ P̄ₖ(a+2 | no 2's) ↦ P̄ₖ(a | no 2's) ⊕ P̄ₖ(2).
///
/// For k = 2 the right component can be 2 or 2̄, which is not 2-regular;
/// callers check the codomain separately.
pub fn f3_map(lambda: &Overpartition, k: u32) -> Result<SplitPair> {
    require(lambda, &Constraint::regular(k)?.no_twos(), 2, "f3")?;
    let (mut big, r, s) = split_ones(lambda);
    let bar1 = Part::over(1);
    let one = Part::plain(1);
    if s >= 2 {
        big.extend(r.then_some(bar1));
        big.extend(ones(s - 2));
        return pair(big, vec![Part::plain(2)]);
    }
    if s == 1 && r {
        return pair(big, vec![Part::over(2)]);
    }
    let last = big.pop().expect("weight >= 2 with at most one 1 has a larger part");
    let n = u64::from(last.size);
    match (s, r, last.overlined) {
        (1, false, true) => {
            big.push(bar1);
            big.extend(ones(n - 2));
            pair(big, vec![one, one])
        }
        (1, false, false) => {
            big.extend(ones(n - 1));
            pair(big, vec![one, one])
        }
        (0, false, true) if n == 2 => pair(big, vec![one, one]),
        (0, false, true) => {
            big.push(bar1);
            big.extend(ones(n - 3));
            pair(big, vec![bar1, one])
        }
        // printed with s = 1, which would not balance the weight
        (0, false, false) => {
            big.extend(ones(n - 2));
            pair(big, vec![bar1, one])
        }
        (0, true, true) => {
            big.push(bar1);
            big.extend(ones(n - 2));
            pair(big, vec![Part::over(2)])
        }
        (0, true, false) => {
            big.extend(ones(n - 1));
            pair(big, vec![Part::over(2)])
        }
        _ => unreachable!("s >= 2 and (s, r) = (1, true) return early"),
    }
}

/// Which branch of f₁ / f₁′ produced an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum F1Variant {
    YZero,
    YOneOverlined,
    YOnePreviousOverlined,
    YOnePreviousPlain,
    ResidueAtLeastTwo,
    ResidueOne,
    YEqualsK,
    MultipleOfK,
    EvenYOne,
    EvenYEqualsK,
}

/// Splits λ ∈ P̄ₖ(a+b | no 1's and no 2's) into P̄ₖ(a | no 1's) ⊕ P̄ₖ(b | no 2's),
/// for odd k >= 5 and even k >= 6 (with the even-k overrides).
pub fn f1_map(lambda: &Overpartition, k: u32, a: u64, b: u64) -> Result<SplitPair> {
    f1_map_traced(lambda, k, a, b).map(|(p, _)| p)
}

pub fn f1_map_traced(lambda: &Overpartition, k: u32, a: u64, b: u64) -> Result<(SplitPair, F1Variant)> {
    if k < 5 {
        return Err(Error::UnsupportedCase(format!(
            "no explicit f1 for k = {k}; use the cardinality check"
        )));
    }
    if a < 1 || b < 1 || lambda.weight() != a + b {
        return Err(Error::Precondition(format!("f1 needs a, b >= 1 and weight a + b, got {lambda}, a = {a}, b = {b}")));
    }
    require(lambda, &Constraint::regular(k)?.no_ones().no_twos(), 2, "f1")?;

    let parts = lambda.to_vec();
    let mut suffix = 0u64;
    let mut i0 = parts.len();
    while suffix < b {
        i0 -= 1;
        suffix += u64::from(parts[i0].size);
    }
    let li = parts[i0];
    let x = b - (suffix - u64::from(li.size));
    let y = u64::from(li.size) - x;
    let prefix = &parts[..i0];
    let mut right: Vec<Part> = parts[i0 + 1..].to_vec();
    right.extend(ones(x));
    let kk = u64::from(k);
    let m = kk / 2;
    let with = |extra: &[Part]| {
        let mut v = prefix.to_vec();
        v.extend_from_slice(extra);
        v
    };
    // λ_{i-1} with the parts before it
    let previous = || -> Result<(Vec<Part>, Part)> {
        if i0 == 0 {
            return Err(Error::UnsupportedCase(format!(
                "f1 with y = 1 and plain λ_i at i = 1 is not specified ({lambda}, a = {a}, b = {b})"
            )));
        }
        Ok((parts[..i0 - 1].to_vec(), parts[i0 - 1]))
    };

    if kk % 2 == 0 {
        if y == 1 && !li.overlined {
            let (mut base, prev) = previous()?;
            if u64::from(prev.size) >= kk + 2 {
                base.push(Part { size: prev.size - k, overlined: prev.overlined });
                base.extend(twos(m));
                base.push(Part::over(1));
                return Ok((pair(base, right)?, F1Variant::EvenYOne));
            }
        }
        if y == kk {
            let mm = m as u32;
            let first = Part { size: mm, overlined: li.overlined };
            return Ok((pair(with(&[first, Part::plain(mm)]), right)?, F1Variant::EvenYEqualsK));
        }
    }

    if y == 0 {
        let mut r = vec![li];
        r.extend_from_slice(&parts[i0 + 1..]);
        return Ok((pair(prefix.to_vec(), r)?, F1Variant::YZero));
    }
    if y == 1 {
        if li.overlined {
            return Ok((pair(with(&[Part::over(1)]), right)?, F1Variant::YOneOverlined));
        }
        let (mut base, prev) = previous()?;
        let p = u64::from(prev.size);
        if p >= kk + 2 {
            base.push(Part { size: prev.size - k, overlined: prev.overlined });
            base.extend(twos(m + 1));
        } else if p >= 3 {
            let c = p / 2;
            match (p % 2 == 1, prev.overlined) {
                (true, true) => {
                    base.push(Part::over(2));
                    base.extend(twos(c));
                }
                (true, false) => base.extend(twos(c + 1)),
                (false, true) => {
                    base.push(Part::over(2));
                    base.extend(twos(c - 1));
                    base.push(Part::over(1));
                }
                (false, false) => {
                    base.extend(twos(c));
                    base.push(Part::over(1));
                }
            }
        } else {
            return Err(Error::UnsupportedCase(format!("λ_(i-1) = {prev} < 3 with y = 1 in {lambda}")));
        }
        let variant =
            if prev.overlined { F1Variant::YOnePreviousOverlined } else { F1Variant::YOnePreviousPlain };
        return Ok((pair(base, right)?, variant));
    }
    let residue = y % kk;
    if y == kk {
        let size = u64::from(li.size);
        if size >= kk + 2 {
            let mm = m as u32;
            let first = Part { size: mm + 1, overlined: li.overlined };
            return Ok((pair(with(&[first, Part::plain(mm)]), right)?, F1Variant::YEqualsK));
        }
        if x != 1 {
            return Err(Error::UnsupportedCase(format!("y = k with λ_i = k + 1 forces x = 1, got x = {x}")));
        }
        let mut left = prefix.to_vec();
        if li.overlined {
            left.push(Part::over(2));
            left.extend(twos(m - 1));
        } else {
            left.extend(twos(m));
        }
        left.push(Part::over(1));
        return Ok((pair(left, right)?, F1Variant::YEqualsK));
    }
    if residue >= 2 || (residue == 1 && y > kk) {
        let variant = if residue == 1 { F1Variant::ResidueOne } else { F1Variant::ResidueAtLeastTwo };
        let part = Part { size: y as u32, overlined: li.overlined };
        return Ok((pair(with(&[part]), right)?, variant));
    }
    // residue 0 and y >= 2k
    let j = u64::from(li.size) % kk;
    let extra = if j <= kk - 2 {
        let gap = kk - j;
        [Part { size: (y - gap) as u32, overlined: li.overlined }, Part::plain(gap as u32)]
    } else {
        [Part { size: (y - 1) as u32, overlined: li.overlined }, Part::over(1)]
    };
    Ok((pair(with(&extra), right)?, F1Variant::MultipleOfK))
}

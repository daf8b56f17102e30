use rug::{Integer, Rational};

use crate::error::{Error, Result};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dedekind sum `s(h, j) = sum_{r=1}^{j-1} ((r/j)) ((h r / j))` with the
/// sawtooth `x - floor(x) - 1/2`, summed directly in O(j).
pub fn dedekind_sum(h: i64, j: u64) -> Result<Rational> {
    if j == 0 || gcd(h.unsigned_abs(), j) != 1 {
        return Err(Error::NotCoprime { h, j });
    }
    let jj = i128::from(j);
    let hh = i128::from(h).rem_euclid(jj);
    // ((r/j)) ((hr/j)) = (2r - j)(2 (hr mod j) - j) / (4 j^2)
    let mut acc = Integer::new();
    for r in 1..jj {
        let a = 2 * r - jj;
        let b = 2 * ((hh * r) % jj) - jj;
        acc += a * b;
    }
    let den = Integer::from(4) * Integer::from(j) * Integer::from(j);
    Ok(Rational::from((acc, den)))
}

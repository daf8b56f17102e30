use serde::Serialize;

use super::interval::Interval;
use crate::error::{Error, Result};

/// μₖ(n) = (a π / b) sqrt(c n), stored as (a, b, c) for k = 2..=9.
const MU_TABLE: [(i64, i64, i64); 8] = [
    (1, 2, 2),
    (1, 3, 6),
    (1, 2, 3),
    (2, 5, 5),
    (1, 6, 30),
    (1, 7, 42),
    (1, 4, 14),
    (2, 3, 2),
];

/// Enclosure of μₖ(n) for one `(k, n)`.
#[derive(Debug, Clone, Serialize)]
pub struct MuValue {
    pub k: u32,
    pub n: u64,
    pub value: Interval,
}

pub(crate) fn check_asymptotic_k(k: u32) -> Result<usize> {
    if (2..=9).contains(&k) {
        Ok((k - 2) as usize)
    } else {
        Err(Error::UnsupportedAsymptoticK(k))
    }
}

/// μₖ(n) enclosed at `prec` bits.
pub fn mu(k: u32, n: u64, prec: u32) -> Result<MuValue> {
    let (a, b, c) = MU_TABLE[check_asymptotic_k(k)?];
    let root = Interval::from_integer(&(rug::Integer::from(c) * n), prec).sqrt()?;
    let value = Interval::pi(prec).mul_i64(a).div_i64(b)?.mul(&root);
    Ok(MuValue { k, n, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::float::Constant;
    use rug::{Float, Rational};

    #[test]
    fn simple_values() {
        let z = mu(2, 0, 128).unwrap().value;
        assert_eq!(*z.lo(), 0);
        assert_eq!(*z.hi(), 0);
        let pi = Float::with_val(512, Constant::Pi);
        assert!(mu(2, 2, 128).unwrap().value.contains_float(&pi));
        let five_pi = Float::with_val(512, &pi * 5u32);
        assert!(mu(6, 30, 128).unwrap().value.contains_float(&five_pi));
        assert_eq!(mu(10, 5, 64).unwrap_err(), Error::UnsupportedAsymptoticK(10));
        assert!(mu(1, 5, 64).is_err());
    }

    #[test]
    fn table_agrees_with_pi_sqrt_n_times_one_minus_one_over_k() {
        for k in 2..=9u32 {
            for n in [1u64, 17, 1000, 123_457] {
                let t = mu(k, n, 256).unwrap().value;
                let frac = Rational::from((n * u64::from(k - 1), u64::from(k)));
                let alt = Interval::pi(256).mul(&Interval::from_rational(&frac, 256).sqrt().unwrap());
                assert!(t.compare(&alt).is_none(), "k={k} n={n}");
                let tiny = Float::with_val(64, Float::i_exp(1, -200)) * alt.lo();
                assert!(Float::with_val(256, t.lo() - alt.lo()).abs() < tiny);
            }
        }
    }
}

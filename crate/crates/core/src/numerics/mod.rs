//! Interval arithmetic, Bessel I₁ enclosures, Dedekind sums and μₖ(n).

mod bessel;
mod dedekind;
mod interval;
mod mu;

pub use bessel::{bessel_i1, bessel_i1_asymptotic_bounds, bessel_i1_upper_simple, e_i};
pub use dedekind::dedekind_sum;
pub use interval::{escalate, Interval, DEFAULT_PRECISION, MIN_PRECISION};
pub use mu::{mu, MuValue};

pub(crate) use mu::check_asymptotic_k;

/// Exact rationals are used for Dedekind sums, Δ₃ values and Q-ratios.
pub type Rational = rug::Rational;

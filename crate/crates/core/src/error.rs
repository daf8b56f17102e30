use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series constant term must be 1 to invert, found {0}")]
    NonUnitConstant(String),

    #[error("k = {k} is not supported here (need k >= {min})")]
    InvalidK { k: u32, min: u32 },

    #[error("k = {0} has no asymptotic constants (supported: 2..=9)")]
    UnsupportedAsymptoticK(u32),

    #[error("{what} for k = {k} requires {unit} >= {threshold}, got {actual}")]
    BelowThreshold {
        what: &'static str,
        k: u32,
        unit: &'static str,
        threshold: u64,
        actual: String,
    },

    #[error("interval domain error: {0}")]
    Domain(String),

    #[error("gcd({h}, {j}) != 1")]
    NotCoprime { h: i64, j: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("case not covered by the explicit construction: {0}")]
    UnsupportedCase(String),

    #[error("comparison still inconclusive at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("exponent range overflow in {0}")]
    Overflow(&'static str),

    #[error("eta quotient with Delta1 = {0} is not handled (only Delta1 = 0)")]
    UnsupportedBranch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

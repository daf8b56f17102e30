//! `regover`: exact counts, lemma checks, asymptotic brackets and
//! inequality sweeps for k-regular overpartitions.

mod commands;
mod output;

use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

pub use output::Format;
use regover::numerics::{DEFAULT_PRECISION, MIN_PRECISION};
use regover::Error;

/// Inclusive integer range written `a..b`, `a..=b` or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

impl Span {
    pub fn iter(self) -> RangeInclusive<u64> {
        self.start..=self.end
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("malformed range {s:?}"));
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Span { start, end })
    }
}

#[derive(Debug, Parser)]
#[command(name = "regover", version, about = "k-regular overpartitions: counts, brackets and inequality checks")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub output: Format,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Starting working precision in bits.
    #[arg(long, env = "REGOVER_PRECISION", default_value_t = DEFAULT_PRECISION, global = true)]
    pub precision: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyProperty {
    Subadd,
    Logconcave,
    Turan3,
    Qbounds,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact values of the k-regular overpartition function.
    Count {
        #[arg(long)]
        k: Span,
        /// Single n.
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u64>,
        /// All n from 0 up to this bound.
        #[arg(long)]
        n_max: Option<u64>,
    },
    /// List the overpartitions of n.
    Enumerate {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: u64,
        /// Forbid non-overlined 1's.
        #[arg(long)]
        no_ones: bool,
        /// Forbid non-overlined 2's.
        #[arg(long)]
        no_twos: bool,
    },
    /// Sweep an inequality; exits 1 if any counterexample is found.
    Verify {
        #[arg(value_enum)]
        property: VerifyProperty,
        #[arg(long)]
        k: Span,
        #[arg(long)]
        horizon: u64,
    },
    /// Certified asymptotic brackets against exact values.
    Asym {
        #[arg(long)]
        k: Span,
        #[arg(long)]
        n: Span,
        #[arg(long, default_value_t = 1)]
        step: u64,
        /// Precision ceiling for escalation.
        #[arg(long, default_value_t = regover::chern::MAX_PRECISION)]
        max_precision: u32,
    },
    /// Check the injections behind log-subadditivity.
    Lemmas {
        /// One of 1.1, 2.1, 2.2, 2.3, 2.4.
        #[arg(long)]
        id: String,
        #[arg(long)]
        k: Span,
        #[arg(long)]
        a_max: Option<u64>,
        #[arg(long)]
        b_max: Option<u64>,
        /// Bound on a + b for two-parameter lemmas.
        #[arg(long, default_value_t = 18)]
        sum_max: u64,
    },
}

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Precision(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PrecisionExhausted { .. } => Failure::Precision(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.precision < MIN_PRECISION {
        eprintln!("error: precision must be at least {MIN_PRECISION} bits, got {}", cli.precision);
        return ExitCode::from(2);
    }
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Precision(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_parsing() {
        assert_eq!("2..9".parse::<Span>().unwrap(), Span { start: 2, end: 9 });
        assert_eq!("2..=9".parse::<Span>().unwrap(), Span { start: 2, end: 9 });
        assert_eq!("5".parse::<Span>().unwrap(), Span { start: 5, end: 5 });
        for bad in ["", "2..", "..9", "a..b", "9..2", "2...9"] {
            assert!(bad.parse::<Span>().is_err(), "{bad}");
        }
    }

    #[test]
    fn precision_exhaustion_maps_to_its_own_class() {
        assert!(matches!(Failure::from(Error::PrecisionExhausted { bits: 384 }), Failure::Precision(_)));
        assert!(matches!(Failure::from(Error::InvalidK { k: 1, min: 2 }), Failure::Usage(_)));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

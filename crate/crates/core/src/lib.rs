pub mod chern;
pub mod combinatorics;
pub mod error;
pub mod inequalities;
pub mod numerics;
pub mod qseries;

pub use error::{Error, Result};

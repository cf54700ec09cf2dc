//! Empirical number variance of zeta zeros, second moments of log|ζ(½+it)|,
//! and the prime- and zero-side formulas that predict them.

pub mod error;
pub mod special;
pub mod sum;
pub mod zero_data;
pub mod zeta_eval;

pub use error::{Error, Result};

pub mod prime_side;
pub mod statistics;
pub mod zero_side;

use serde::{Deserialize, Serialize};

/// A computed value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

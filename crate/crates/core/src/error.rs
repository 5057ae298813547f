use std::io;

use thiserror::Error;

/// Errors produced by the bound computations and the verification harnesses.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The chi-squared survival function underflowed while it was needed as a divisor.
    #[error("survival function underflow at t = {t} (below {floor:e})")]
    Overflow { t: f64, floor: f64 },

    /// A sparse-vector construction received input it cannot use (e.g. a zero column).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A measurement scan found no admissible n below the cap.
    #[error("no admissible n up to {cap}: {reason}")]
    NotFound { cap: usize, reason: String },

    /// A scanned objective was expected to be monotone and was not.
    #[error("objective not monotone in n: value at n = {at} exceeds the value at n = {before}")]
    NotMonotone { before: usize, at: usize },

    /// An enumeration would exceed its configured size cap.
    #[error("resource cap exceeded: {count} supports to enumerate, cap is {cap}")]
    ResourceCap { count: u128, cap: u128 },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

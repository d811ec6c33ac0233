use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which part of a certified sum limits the number of trustworthy digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    /// The squarefree lower correction; shrinks like `q^{-N/2}`.
    LowerDefect,
    /// The squarefull upper correction `2/(N q^N)`.
    UpperDefect,
    /// Interval width accumulated from working-precision rounding.
    Rounding,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::LowerDefect => {
                f.write_str("the lower tail defect (increase the degree bound N)")
            }
            Limit::UpperDefect => {
                f.write_str("the upper tail defect (increase the degree bound N)")
            }
            Limit::Rounding => f.write_str("working precision (increase the bit precision)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be positive, got 0")]
    Zero { what: &'static str },
    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: i64 },
    #[error("{0} is too small to be a field order")]
    FieldOrderTooSmall(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("precision must be at least 64 bits, got {0}")]
    PrecisionTooLow(u32),
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("logarithm of an interval that is not strictly positive")]
    LogNonPositive,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("count table does not cover the request: {0}")]
    MissingTable(String),
    #[error("requested {requested} decimal digits but only {certified} are certified; limited by {limit}")]
    InsufficientPrecision {
        requested: usize,
        certified: usize,
        limit: Limit,
    },
}

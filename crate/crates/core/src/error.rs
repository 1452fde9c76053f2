use thiserror::Error;

/// Errors raised by the library. Each variant corresponds to one class of
/// failure so callers (the CLI in particular) can map them to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is composite where a prime is required.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// An argument exceeds a table limit or resource guard.
    #[error("out of range: {0}")]
    Bounds(String),

    /// An intermediate value would not fit in 64 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// The formal logarithm is only defined at `p - 1` for primes `p`.
    #[error("logarithm undefined at {0}: {0} + 1 is not a prime")]
    UndefinedLogarithm(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

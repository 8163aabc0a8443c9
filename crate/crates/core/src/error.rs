use alloc::string::String;

/// Errors raised by the core library.
///
/// A failed verification is not an error; it is reported through
/// [`crate::verify::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request needs primes beyond the configured sieve capacity.
    #[error("capacity exceeded: {what} needs {needed}, capacity is {capacity}")]
    Capacity {
        what: &'static str,
        needed: u64,
        capacity: u64,
    },
    /// An exact accumulator would have overflowed its integer width.
    #[error("accumulator overflow at n = {n}")]
    Overflow { n: u64 },
    /// A numerical tolerance could not be reached.
    #[error("precision error: {0}")]
    Precision(String),
    /// A checkpoint is internally inconsistent.
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    /// Malformed textual input (rationals, tables).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}
pub(crate) use domain;

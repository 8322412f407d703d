//! Error type shared across the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A polynomial expected to carry sign information is identically zero,
    /// or an input configuration is degenerate (e.g. a tuple of trajectories
    /// that stays affinely dependent for all time).
    Degenerate(String),
    /// An enumeration would exceed its work guard; the offending size and
    /// the limit are reported.
    GuardExceeded { what: &'static str, size: u128, limit: u128 },
    /// Structurally invalid input: mismatched dimensions, empty point set,
    /// out-of-range parameter.
    InvalidInput(String),
    /// Randomized construction did not verify within the attempt budget.
    AttemptsExhausted { attempts: usize, detail: String },
    /// The operation is not implemented for this dimension.
    UnsupportedDimension(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
            Error::GuardExceeded { what, size, limit } => {
                write!(f, "{what} guard exceeded: {size} > {limit}")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::AttemptsExhausted { attempts, detail } => {
                write!(f, "no verified candidate after {attempts} attempts: {detail}")
            }
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}"),
        }
    }
}

impl std::error::Error for Error {}

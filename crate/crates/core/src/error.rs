//! Crate-wide error type.

use std::fmt;

/// Errors reported by point-set construction, merit evaluation, and search.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Polynomial arithmetic with a zero modulus.
    ZeroModulus,
    /// An argument violated a documented precondition.
    InvalidArgument(String),
    /// A point or candidate index outside the valid range.
    IndexOutOfRange { index: u64, bound: u64 },
    /// A generating matrix whose top k×k block is singular, or a singular
    /// scrambling matrix.
    SingularMatrix(String),
    /// Candidate space larger than the configured enumeration guard.
    GuardExceeded { cardinality: u128, guard: u128 },
    /// No admissible candidate exists for a search.
    NoCandidate(String),
    /// A (construction, FOM, weights, q) combination a method does not support.
    Unsupported(String),
    /// A parameter file that does not match its grammar.
    Parse { line: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroModulus => write!(f, "zero modulus"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Error::SingularMatrix(m) => write!(f, "singular matrix: {m}"),
            Error::GuardExceeded { cardinality, guard } => {
                write!(f, "candidate space of size {cardinality} exceeds guard {guard}")
            }
            Error::NoCandidate(m) => write!(f, "no admissible candidate: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported combination: {m}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

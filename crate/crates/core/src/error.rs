//! Error type shared across the crate.
//!
//! Anything a caller can trip over is a typed variant; panics are reserved
//! for internal invariant violations. Numerical procedures that stop at an
//! iteration cap report `NoConvergence` and carry the best estimate so far,
//! so the caller can decide whether the partial answer is still useful.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operand had the wrong kind for the operation (e.g. a step
    /// function handed to a sparse-only routine, mixed vector kinds).
    #[error("kind mismatch: {0}")]
    KindMismatch(String),

    /// A branch index fell outside the operator's branch range.
    #[error("branch {branch} out of range: operator has arity {arity}")]
    BranchOutOfRange { branch: u32, arity: u32 },

    /// Invalid argument value (empty family, nonpositive tolerance, …).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural invariant failed at construction time.
    #[error("validation error: {0}")]
    Validation(String),

    /// A size or index exceeded a documented cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Two diagonal tails have no common finite period to compare over.
    #[error("incomparable tails: {0}")]
    TailIncomparable(String),

    /// The operator is not in the class the operation requires.
    #[error("class mismatch: {0}")]
    ClassMismatch(String),

    /// Periodicity was required but not detected within the cap.
    #[error("no period found: {0}")]
    NotPeriodic(String),

    /// An iterative procedure hit its cap; `estimate` is the best value
    /// reached, with `residual` describing how unsettled it still was.
    #[error("{what} did not converge within {iterations} iterations (best estimate {estimate}, residual {residual})")]
    NoConvergence {
        what: String,
        iterations: usize,
        estimate: f64,
        residual: f64,
    },

    /// A construction promised an error bound it could not certify.
    #[error("certificate failure: {0}")]
    CertificateFailure(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// The combination of inputs is not supported by this representation.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn kind_mismatch(msg: impl Into<String>) -> Self {
        Error::KindMismatch(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

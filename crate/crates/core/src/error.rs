//! Error types shared across the crate.
//!
//! Errors fall into three families that callers (notably the CLI) treat
//! differently: usage errors (bad arguments), internal-consistency failures
//! (a formula produced something the theory forbids, which signals a bug),
//! and resource refusals (an enumeration whose estimated cost exceeds the
//! configured cap).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("partition weight mismatch in {context}: {left} vs {right}")]
    SizeMismatch {
        context: &'static str,
        left: u32,
        right: u32,
    },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("connection count for ({nu}, {nu_prime}, {nu_second}) is not a nonnegative integer: {value}")]
    NonIntegralConnectionCount {
        nu: String,
        nu_prime: String,
        nu_second: String,
        value: String,
    },

    #[error("row {row} of X is not achievable from its partition {rho}")]
    UnachievableRow { row: usize, rho: String },

    #[error("non-polynomial result in {context}: remainder denominator {denominator}")]
    NonPolynomialResult {
        context: String,
        denominator: String,
    },

    #[error("degree bound violated in {context}: degree {degree} exceeds {bound}")]
    DegreeBoundViolation {
        context: String,
        degree: usize,
        bound: usize,
    },

    #[error("character sum is not a rational integer divisible by q (coefficients {coefficients})")]
    NonIntegerCharacterSum { coefficients: String },

    #[error("estimated cost {estimated} exceeds the resource cap {cap}")]
    ResourceCapExceeded { estimated: u128, cap: u128 },

    #[error("no normalization convention reproduces the brute-force probes")]
    NoSurvivingConvention,

    #[error("multiple normalization conventions survive the probe suite: {survivors:?}")]
    AmbiguousConvention { survivors: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that indicate a bug in this crate rather than bad
    /// input or an oversized request.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonIntegralConnectionCount { .. }
                | Error::UnachievableRow { .. }
                | Error::NonPolynomialResult { .. }
                | Error::DegreeBoundViolation { .. }
                | Error::NonIntegerCharacterSum { .. }
                | Error::NoSurvivingConvention
                | Error::AmbiguousConvention { .. }
        )
    }

    pub fn is_resource_refusal(&self) -> bool {
        matches!(self, Error::ResourceCapExceeded { .. })
    }
}

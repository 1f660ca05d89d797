//! Central error type. Cap overruns are errors, never silent skips.

use crate::support::{AxiomWitness, ModularWitness};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus polynomial is reducible: divisible by {factor}")]
    ReducibleModulus { factor: String },

    #[error("element does not belong to the ring: {0}")]
    ElementMismatch(String),

    #[error("element {0} is not a unit")]
    NonUnit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the zero code has no nonzero codewords")]
    ZeroCode,

    #[error("{what} needs {needed} but the cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("invalid support description: {0}")]
    InvalidSupport(String),

    #[error("map violates support axiom {}", .0.axiom_name())]
    NotASupport(AxiomWitness),

    #[error("support is not modular (witness at coordinate {})", .0.coord + 1)]
    NotModular(ModularWitness),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used verbatim in CLI error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidRing(_) => "invalid_ring",
            Error::NotPrime(_) => "not_prime",
            Error::ReducibleModulus { .. } => "reducible_modulus",
            Error::ElementMismatch(_) => "element_mismatch",
            Error::NonUnit(_) => "non_unit",
            Error::InvalidInput(_) => "invalid_input",
            Error::ZeroCode => "zero_code",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InvalidSupport(_) => "invalid_support",
            Error::NotASupport(_) => "not_a_support",
            Error::NotModular(_) => "not_modular",
            Error::Internal(_) => "internal",
        }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("no generator found for GF({0})")]
    NoGenerator(u64),

    #[error("the sum-graph spectrum is not determined by the periods when q is odd and n is odd")]
    UnsupportedSumSpectrum,

    #[error("graph is not connected")]
    Disconnected,

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("oracle unavailable: {0}")]
    OracleUnavailable(String),

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
}

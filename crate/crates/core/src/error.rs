use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants split into two families: invalid input (a precondition was
/// violated) and numerical failure (an iteration did not converge). The CLI
/// maps these onto different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid integrand: {0}")]
    InvalidSpec(String),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("coefficient magnitudes span 2^{0}, beyond the f64 range")]
    Overflow(i64),
    #[error("zero coefficient: {0}")]
    ZeroCoefficient(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("point {0} is within the slit margin")]
    SlitProximity(String),
}

impl Error {
    /// True for errors that come from a failed iteration rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence(_) | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by state constructors, operator application, and the
/// protocol entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Every outcome probability of a projective measurement fell below the
    /// resolvable floor.
    #[error("invalid measurement: all outcome probabilities below {floor:e}")]
    InvalidMeasurement { floor: f64 },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

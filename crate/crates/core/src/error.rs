use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live over different variable lists, or counts do not line up.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    /// A composition whose denominator vanishes identically.
    #[error("indeterminacy: {0}")]
    Indeterminacy(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the numerics in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QgravError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown slot label `{0}`")]
    UnknownSlot(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected {1}")]
    BadTrace(f64, f64),

    #[error("operator is not positive semidefinite (minimum eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("Kraus completeness violated (max deviation {0:.3e})")]
    Incomplete(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, QgravError>;

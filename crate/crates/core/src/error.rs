use thiserror::Error;

use crate::exact_algebra::ExactField;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("factorial gate: {k}! is not invertible over {field}")]
    FactorialGate { k: u64, field: ExactField },

    #[error("not a Maurer-Cartan element: first defect in weight {weight}")]
    NotMaurerCartan { weight: usize },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("undefined product: {0}")]
    UndefinedProduct(String),

    #[error("invalid cooperad at basis element {element}: {reason}")]
    InvalidCooperad { element: String, reason: String },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error("problem hash mismatch: certificate has {expected}, problem hashes to {found}")]
    HashMismatch { expected: String, found: String },

    #[error("certificate: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn parse(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), msg: msg.into() }
    }
}

/// Fails with a factorial-gate error naming `n!` unless every `k <= n` is a unit.
pub fn require_factorial(field: ExactField, n: u64) -> Result<()> {
    match field.first_non_unit_up_to(n) {
        Some(_) => Err(Error::FactorialGate { k: n, field }),
        None => Ok(()),
    }
}

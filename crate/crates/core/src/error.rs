use thiserror::Error;

use crate::field::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("differential does not square to zero: ∂∘∂ ≠ 0 at degree {degree}")]
    NotAComplex { degree: i32 },

    #[error("axiom violated: {0}")]
    Axiom(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degree {degree} is outside the clean window (data is exact only through degree {exact_through}); extend the truncation")]
    Truncation { degree: i32, exact_through: i32 },

    #[error("not a local DG algebra: {0}")]
    NotLocal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown reference `{0}`")]
    Reference(String),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for input problems, 3 for invariant breaches.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The closed-form discriminant has a zero denominator when `a = -p`.
    #[error("closed-form discriminant is singular at a = -p = {a}; use the resultant route")]
    SingularDiscriminant { a: i64 },

    /// A budgeted factorization stopped before reaching a full factorization.
    #[error("factorization budget exhausted; unfactored cofactor {cofactor}")]
    FactorizationIncomplete { cofactor: String },

    /// A self-check that should hold by construction failed.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

use thiserror::Error;

/// Errors raised by the constructions in this crate.
///
/// Verification problems that are expected outcomes (a point failing one of its
/// defining identities, a candidate root datum violating an axiom) are returned
/// as reports, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("division leaves a nonzero remainder: {0}")]
    InexactDivision(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size limit exceeded: {what} needs {estimate} elements, limit is {limit}")]
    SizeLimit {
        what: String,
        estimate: u128,
        limit: u128,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub fn size(what: impl Into<String>, estimate: u128, limit: u128) -> Self {
        Error::SizeLimit {
            what: what.into(),
            estimate,
            limit,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

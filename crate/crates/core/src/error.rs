use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("empty word has no cyclic class")]
    EmptyWord,

    #[error("malformed word {word}: {reason}")]
    MalformedWord { word: String, reason: String },

    #[error("polynomials are not cyclically equivalent; class {class} differs by {difference}")]
    NotEquivalent { class: String, difference: String },

    #[error("m = {m} has the wrong parity for this construction")]
    WrongParity { m: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty basis")]
    EmptyBasis,

    #[error("gram solution is not feasible")]
    NotFeasible,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

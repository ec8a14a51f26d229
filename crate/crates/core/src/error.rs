use thiserror::Error;

/// Errors raised by construction and checker entry points.
///
/// Usage errors (mismatched types, malformed tables, bad literals) are kept
/// distinct from unsupported operations so the CLI can map them to exit
/// code 2 uniformly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("semiring mismatch: {0} vs {1}")]
    SemiringMismatch(String, String),

    #[error("value does not belong to semiring {semiring}: {detail}")]
    ValueKind { semiring: String, detail: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("bad literal {literal:?} for semiring {semiring}")]
    BadLiteral { literal: String, semiring: String },

    #[error("unknown case id: {0}")]
    UnknownCase(String),

    #[error("unknown semiring: {0}")]
    UnknownSemiring(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

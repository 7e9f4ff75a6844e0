use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("family {family}: expected {expected} parameters, got {got}")]
    Arity { family: u8, expected: usize, got: usize },

    #[error("unknown family id {0}")]
    UnknownFamily(u8),

    #[error("catalog integrity failure for family {family}: {msg}")]
    CatalogIntegrity { family: u8, msg: String },

    #[error("class table mismatch: {0}")]
    ClassIntegrity(String),

    #[error("orbit sum mismatch: {0}")]
    OrbitSumMismatch(String),

    #[error("proof step {step} failed: {msg}")]
    ProofStep { step: &'static str, msg: String },

    #[error("missing variable {0} in assignment")]
    MissingVariable(String),

    #[error("unknown export format {0:?}")]
    UnknownFormat(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

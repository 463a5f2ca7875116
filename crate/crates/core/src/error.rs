use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("rank mismatch: operator expects rank {expected}, section has rank {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank mismatch in highest weights: {left} vs {right}")]
    WeightRankMismatch { left: usize, right: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("malformed document: {0}")]
    Document(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("prolongation did not terminate within {0} levels")]
    NotTerminated(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("word is not in the relation subgroup: {0}")]
    NotInRelationSubgroup(String),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a complex: {0}")]
    NotAComplex(String),

    #[error("homomorphism does not commute with the projection to G: {0}")]
    NonCommuting(String),

    #[error("resolution depth insufficient: {0}")]
    DepthInsufficient(String),

    #[error("dictionary entry skipped: {0}")]
    Skipped(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    /// True when the failure came from a configured resource cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded(_))
    }
}

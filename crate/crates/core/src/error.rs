use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("concept budget of {budget} concepts exceeded")]
    BudgetExceeded { budget: usize },

    #[error("concept id {id} out of range (lattice has {len} concepts)")]
    ConceptOutOfRange { id: usize, len: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("index `{spec}`: {source}")]
    Index {
        spec: String,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

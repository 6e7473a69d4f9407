use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("size mismatch: expected {expected} vertices, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("{what}: {n} vertices exceeds the configured limit of {limit}")]
    LimitExceeded { what: &'static str, n: usize, limit: usize },

    #[error("vertex sets must be nonempty and disjoint")]
    BadVertexSets,

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("wrong decomposition family: {0}")]
    WrongGrammar(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("key construction failed at bullet {bullet}: {detail}")]
    KeyConstruction { bullet: u8, detail: String },

    #[error("parameter out of domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

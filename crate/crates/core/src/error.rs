use matchtor_linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("simplex has two parallel edges: {0}")]
    ParallelEdge(String),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<LinalgError> for CoreError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::ResourceLimit(m) => CoreError::ResourceLimit(m),
            LinalgError::InvalidInput(m) => CoreError::InvalidInput(m),
            LinalgError::Dimension(m) | LinalgError::Invariant(m) => CoreError::Invariant(m),
        }
    }
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;

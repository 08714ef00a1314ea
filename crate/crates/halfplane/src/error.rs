use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("singular matrix")]
    Singular,
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

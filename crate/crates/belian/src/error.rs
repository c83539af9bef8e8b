use thiserror::Error;

/// Errors surfaced by constructors and operations.
///
/// `Structural` means the input data could not even be interpreted
/// (bad indices, dangling names, mismatched shapes). `Validation`
/// means the data parsed but violates an axiom; the message lists
/// concrete witnesses. `Guard` means a size or depth guard tripped.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
    pub fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

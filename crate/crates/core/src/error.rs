use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates the operation's domain (bad index, bad dimension,
    /// mixed arithmetic modes, dependent basis, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds the configured size limits.
    #[error("resource error: {0}")]
    Resource(String),

    /// An iterative factorization failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

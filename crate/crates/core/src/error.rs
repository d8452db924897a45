use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Domain` marks arguments outside an operation's domain (an element not in
/// the declared universe, an index out of range). `Precondition` marks inputs
/// that are structurally fine but violate a stated contract (weights that do
/// not sum to one, a table whose empty-order entry is wrong). `Refused` marks
/// computations that are declined because they are beyond desk scale.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn refused<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Refused(msg.into()))
}

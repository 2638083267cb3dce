use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller supplied arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),
    /// A computed quantity violated a postcondition that must hold
    /// (non-integral count, inexact polynomial division, table/scan mismatch).
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// Brute-force enumeration would exceed its hard cap.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    /// A checked theorem or bound failed on concrete data.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}

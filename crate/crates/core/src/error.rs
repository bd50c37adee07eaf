//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors surfaced by the core numerics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A runtime argument violated an operation's precondition.
    InvalidInput(String),
    /// A configuration value is out of range or inconsistent.
    InvalidConfig(String),
    /// Training produced a non-finite loss; aborted rather than continuing.
    NonFiniteLoss { epoch: usize, loss: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NonFiniteLoss { epoch, loss } => {
                write!(f, "non-finite training loss {loss} at epoch {epoch}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn input_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidConfig(msg.into()))
}

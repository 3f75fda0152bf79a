use thiserror::Error;

/// Errors raised by the core algorithms.
///
/// Variants are grouped so that a front end can map them onto distinct exit
/// codes: validation problems, size caps and internal invariant breaches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u64, base: u64 },

    #[error("invalid digit system: {0}")]
    InvalidSystem(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{what} is {size}, exceeding the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// True for errors caused by a size or memory cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// True for internal invariant violations (a bug or a broken bound).
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

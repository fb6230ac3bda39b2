use thiserror::Error;

use crate::prefs::SpeKillerWitness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input.
    #[error("input error: {0}")]
    Input(String),
    /// The preference profile contains the forbidden pattern.
    #[error("preferences contain the SPE killer: {0}")]
    Killer(SpeKillerWitness),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Killer(_) => 2,
            Error::Unsupported(_) => 3,
            Error::Input(_) | Error::Precondition(_) => 4,
            Error::Resource(_) => 5,
            Error::Internal(_) => 1,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

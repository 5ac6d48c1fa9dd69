use thiserror::Error;

/// Failure classes shared by every module.
///
/// The split mirrors how callers react: usage and structural errors are bad
/// input, resource errors are size caps, and logic errors mean a structural
/// theorem failed to hold on a concrete instance.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("logic error: {0}")]
    Logic(String),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn logic(msg: impl Into<String>) -> Self {
        Error::Logic(msg.into())
    }

    /// Bad-input errors become logic errors: used where a construction's
    /// inputs are guaranteed valid by a theorem.
    pub fn into_logic(self) -> Self {
        match self {
            Error::Usage(m) | Error::Structural(m) => Error::Logic(m),
            e => e,
        }
    }

    pub fn is_logic(&self) -> bool {
        matches!(self, Error::Logic(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::fmt::Display;
use std::path::Path;

/// Failure of a command, split by who has to fix it.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or flag combinations. Exit code 1.
    #[error("usage: {0}")]
    Usage(String),
    /// Unreadable, malformed or inconsistent inputs. Exit code 2.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<bridge_corrnet::Error> for CliError {
    fn from(e: bridge_corrnet::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Attaches a file path to an error message.
pub(crate) fn at(path: &Path, e: impl Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

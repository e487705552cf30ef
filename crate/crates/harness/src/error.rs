use std::path::{Path, PathBuf};

use modal_core::{FormatError, ModalError};
use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Modal(#[from] ModalError),
}

/// Reads a whole text file, keeping the path in the error.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|source| HarnessError::File { path: path.to_path_buf(), source })
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Modal(ModalError::Io(e))
    }
}

impl From<FormatError> for HarnessError {
    fn from(e: FormatError) -> Self {
        HarnessError::Modal(ModalError::Format(e))
    }
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

impl HarnessError {
    /// Process exit status: 2 for bad configuration, 3 for numerical
    /// failures, 4 for I/O and file-format problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => EXIT_CONFIG,
            HarnessError::File { .. } => EXIT_IO,
            HarnessError::Modal(e) => match e {
                ModalError::InvalidParameter(_)
                | ModalError::DimensionMismatch(_)
                | ModalError::IndexOutOfRange { .. }
                | ModalError::BudgetExceeded { .. } => EXIT_CONFIG,
                ModalError::Io(_) | ModalError::Format(_) => EXIT_IO,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}

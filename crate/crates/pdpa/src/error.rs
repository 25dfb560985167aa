use std::path::PathBuf;

/// Errors of the file formats and commands, grouped by process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{0}")]
    Data(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] pdpa_core::Error),

    #[error("{0}")]
    Internal(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        AppError::Parse { path: path.into(), message: message.into() }
    }

    /// 1 usage, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Core(pdpa_core::Error::Config(_)) => 1,
            AppError::Parse { .. } | AppError::Data(_) | AppError::Io { .. } | AppError::Core(_) => 2,
            AppError::Internal(_) => 3,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;

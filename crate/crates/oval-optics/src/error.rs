use std::path::PathBuf;

use oval_optics_core::Error as CoreError;
use thiserror::Error;

pub type Result<T, E = AppError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scene violates {} constraint(s):\n  {}", .0.len(), .0.join("\n  "))]
    Schema(Vec<String>),
    #[error("{context}: {source}")]
    Geometry {
        context: String,
        #[source]
        source: CoreError,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl AppError {
    pub fn geometry(context: impl Into<String>, source: CoreError) -> Self {
        AppError::Geometry {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 scene errors, 3 geometric degeneracy,
    /// 4 failed validation, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Parse { .. } | AppError::Schema(_) => 2,
            AppError::Geometry { source, .. } => match source {
                CoreError::IndicesEqual | CoreError::InvalidArgument(_) => 2,
                _ => 3,
            },
            AppError::Validation(_) => 4,
            AppError::Io { .. } | AppError::Csv(_) => 1,
        }
    }
}

/// Attach scene-level context to a core result.
pub trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for std::result::Result<T, CoreError> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| AppError::geometry(what(), e))
    }
}

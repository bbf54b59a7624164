use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Machine-readable error category, also used to pick the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Usage,
    Validation,
    Numeric,
    Io,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Usage => "usage",
            Category::Validation => "validation",
            Category::Numeric => "numeric",
            Category::Io => "io",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Category::Usage => 2,
            Category::Validation => 3,
            Category::Numeric => 4,
            Category::Io => 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("device is in the normal state: operating temperature {t_op} K >= T_C {t_c} K")]
    NormalState { t_op: f64, t_c: f64 },

    #[error("configuration rejected:\n  - {}", .0.join("\n  - "))]
    Config(Vec<String>),

    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error("unsupported in this search mode: {0}")]
    UnsupportedMode(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("numeric error: {message} ({diagnostics})")]
    Numeric { message: String, diagnostics: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed model file: {0}")]
    Model(String),
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::Usage(_) | Error::UnsupportedMode(_) => Category::Usage,
            Error::Domain(_)
            | Error::NormalState { .. }
            | Error::Config(_)
            | Error::Parse { .. }
            | Error::Calibration(_)
            | Error::Training(_)
            | Error::Model(_) => Category::Validation,
            Error::Numeric { .. } => Category::Numeric,
            Error::Io { .. } => Category::Io,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

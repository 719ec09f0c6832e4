use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Model(#[from] lastmile_core::Error),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Syntax(_) => "syntax",
            CliError::Invalid { .. } => "invalid_config",
            CliError::Io { .. } => "io",
            CliError::Model(_) => "model",
            CliError::Runtime(_) => "runtime",
        }
    }

    /// 2 for problems with the configuration, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) | CliError::Invalid { .. } => 2,
            _ => 3,
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: ErrorBody {
                kind: self.kind(),
                path: match self {
                    CliError::Invalid { path, .. } => Some(path.clone()),
                    CliError::Io { path, .. } => Some(path.display().to_string()),
                    _ => None,
                },
                message: match self {
                    CliError::Invalid { message, .. } => message.clone(),
                    CliError::Io { source, .. } => source.to_string(),
                    other => other.to_string(),
                },
                exit_code: self.exit_code(),
            },
        }
    }
}

/// Machine-readable failure report printed to stderr.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub message: String,
    pub exit_code: i32,
}

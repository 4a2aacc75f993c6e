//! Failure modes of a CLI run and their exit codes.

use serde_json::json;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_MODULE: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Module(#[from] toeplitz_dyn::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Module(_) => EXIT_MODULE,
            CliError::Io(_) => EXIT_IO,
        }
    }

    /// `{"error": {"kind", "message"}}` for module errors.
    pub fn json_body(&self) -> Option<String> {
        let CliError::Module(e) = self else {
            return None;
        };
        let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        Some(serde_json::to_string_pretty(&body).expect("error body serializes"))
    }
}

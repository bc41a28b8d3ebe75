use std::path::PathBuf;

use thiserror::Error;

/// Process exit code for a completed computation.
pub const EXIT_OK: i32 = 0;
/// Malformed input: unreadable file, schema error, invalid system.
pub const EXIT_INPUT: i32 = 2;
/// Point budget or sampling resolution exceeded.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("`{0}` is neither a readable file nor a bundled dataset (try `mwlab examples list`)")]
    UnknownSpec(String),
    #[error("schema error at line {line}, column {column}: {message}")]
    Schema { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("invalid {name}: {message}")]
    Env { name: &'static str, message: String },
    #[error("image encoding failed: {0}")]
    Image(#[from] image::ImageError),
    #[error(transparent)]
    Core(#[from] mwlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mwlab::Error::PointBudget { .. } | mwlab::Error::ResolutionInsufficient { .. }) => EXIT_RESOURCE,
            CliError::Write { .. } | CliError::Image(_) => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        CliError::Schema { line: e.line(), column: e.column(), message }
    }
}

pub type CliResult<T> = Result<T, CliError>;

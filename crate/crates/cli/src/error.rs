use thiserror::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    /// `pointer` is a JSON pointer into the spec document.
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("expression error at {pointer}: {source}")]
    Expression {
        pointer: String,
        source: soliton_core::Error,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("all {count} samples were excluded; last reason: {reason}")]
    NoSamples { count: usize, reason: String },

    #[error(transparent)]
    Engine(#[from] soliton_core::Error),
}

impl CliError {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::NoSamples { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        }
    }
}

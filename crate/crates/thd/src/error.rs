use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// A configuration field is malformed; `path` names the field.
    #[error("config field `{path}`: {message}")]
    Config { path: String, message: String },
    #[error(transparent)]
    Core(#[from] thd_core::Error),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Runtime(String),
}

impl SimError {
    pub fn config(path: impl Into<String>, message: impl ToString) -> Self {
        SimError::Config { path: path.into(), message: message.to_string() }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        SimError::Io { path: path.into(), source }
    }
}

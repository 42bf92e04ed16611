use thiserror::Error;

/// Everything that ends an invocation with exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid input at {path}: {message}")]
    Input { path: String, message: String },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("scale guard: {what} is {estimate}, above the limit {limit}; rerun with --force to proceed")]
    Guard { what: String, estimate: u128, limit: u128 },

    #[error(transparent)]
    Engine(#[from] braidext::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Input { .. } => "input",
            CliError::Io { .. } => "io",
            CliError::Guard { .. } => "scale-guard",
            CliError::Engine(braidext::Error::ScaleGuard { .. }) => "scale-guard",
            CliError::Engine(_) => "engine",
        }
    }
}

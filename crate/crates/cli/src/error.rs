use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] magpol_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid result: {0}")]
    Invalid(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl CliError {
    /// 0 success, 1 validation, 2 convergence, 3 invariant failure.
    pub fn exit_code(&self) -> i32 {
        use magpol_core::Error as E;
        match self {
            CliError::Core(E::NotConverged { .. } | E::UnboundedBelow(_) | E::Quadrature(_)) => 2,
            CliError::Invariant(_) => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

use quadtangent::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A hypothesis of the construction fails (vanishing genericity factor,
    /// infinite family of transversals).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Degenerate(_) => 2,
            CliError::Input(_) | CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonGeneric(_) | Error::DegenerateFlat(_) => CliError::Degenerate(e.to_string()),
            Error::Numerical(_) => CliError::Numerical(e.to_string()),
            Error::Dimension(_) | Error::NotSymmetric | Error::OutOfRange(_) | Error::Parse(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

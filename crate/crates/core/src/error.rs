use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("degenerate flat: {0}")]
    DegenerateFlat(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// A factor of the genericity condition vanishes; the payload names it.
    #[error("non-generic parameters: {0} = 0")]
    NonGeneric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid q-matrix: {0}")]
    InvalidQ(String),

    #[error("q-matrix is not in normal form: {0}")]
    NotNormalForm(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree {0} is not in Rad(f)")]
    NotInRadical(String),

    #[error("degree {0} lies in Rad(f)")]
    InRadical(String),

    #[error("invalid module data: {0}")]
    InvalidModule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

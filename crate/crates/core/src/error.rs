use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("label {0} is missing from the label set")]
    MissingLabel(String),
    #[error("label clash: {0} appears on both sides of a composition")]
    LabelClash(String),
    #[error("map is not a bijection on the label set")]
    NotBijective,
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

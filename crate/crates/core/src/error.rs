use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("o_f at index {0} is matched outside the window")]
    UnresolvedFlexible(i64),
    #[error("index {0} has no match inside the window")]
    Unmatched(i64),
    #[error("phi* needed at index {0} falls outside the window")]
    CensoredPhiStar(i64),
    #[error("word is not balanced")]
    NotBalanced,
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not found")]
    NotFound,
    #[error("exhausted {0} tries")]
    Exhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Resource(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Resource(e.to_string())
    }
}

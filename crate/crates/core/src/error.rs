use crate::weyl::Kind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("element {element} is not valid for {kind}")]
    InvalidElement { element: String, kind: Kind },
    #[error("root system mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: Kind, found: Kind },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("gallery of {len} labels exceeds the naive folding bound {bound}")]
    OracleBound { len: usize, bound: usize },
    #[error("tail did not stabilize: {0}")]
    NoStabilization(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

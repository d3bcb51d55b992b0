use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("condition not applicable: {0}")]
    Inapplicable(String),
    #[error("{0} is not contained in {1}")]
    Containment(String, String),
    #[error("x = {0} lies outside [0, 1]")]
    Domain(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("candidate function is not strictly positive at node {0}")]
    Positivity(usize),
    #[error("divergent tail: {0}")]
    DivergentTail(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("no break point: {0}")]
    NoBreakPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema version {found} (expected {expected})")]
    Schema { found: u32, expected: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

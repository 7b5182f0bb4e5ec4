use thiserror::Error;

use crate::rootdata::Weight;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("word {word:?} is not reduced")]
    NotReduced { word: Vec<usize> },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Weight),
    #[error("full module construction requires finite type")]
    InfiniteType,
    #[error("weight {weight:?} lies below the module cutoff")]
    CutoffUnderflow { weight: Weight },
    #[error("weight space {weight:?} has dimension {dim}, expected 1")]
    NotOneDimensional { weight: Weight, dim: usize },
    #[error("length condition violated: {0}")]
    LengthCondition(String),
    #[error("pair is not incident: {0}")]
    NotIncident(String),
    #[error("truncation bound exceeded: {0}")]
    Truncation(String),
    #[error("element is not in the expected span: {0}")]
    NotInSpan(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cache I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

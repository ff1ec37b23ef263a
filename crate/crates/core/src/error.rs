use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid position: {0}")]
    InvalidPosition(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("rank out of range: {0}")]
    RankOutOfRange(String),
    #[error("position is not K-canonical")]
    NotKCanonical,
    #[error("positions are not in a common region")]
    RegionMismatch,
    #[error("invalid region parameters: {0}")]
    InvalidRegion(String),
    #[error("hand holds no {0}")]
    EmptyHand(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

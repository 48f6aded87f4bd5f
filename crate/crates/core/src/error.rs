use num_bigint::BigUint;
use thiserror::Error;

use crate::fractal_seq::GrowthViolation;

/// Errors shared across the crate.
///
/// `ResourceLimit` is kept separate from `InvalidInput` because callers
/// (in particular the CLI) map the two to different exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rank {rank} exceeds monomial count {count} (degree {degree}, {vars} variables)")]
    RankOutOfRange {
        rank: BigUint,
        count: BigUint,
        degree: usize,
        vars: usize,
    },

    #[error("not a coherent growth at level {level}: {reason}")]
    InvalidGrowth {
        level: usize,
        reason: GrowthViolation,
    },

    #[error("not a bilex set: {0}")]
    NotBilex(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

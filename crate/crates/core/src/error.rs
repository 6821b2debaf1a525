use thiserror::Error;

/// Errors produced by the phase, network and connection routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not sectorial (margin {margin:.3e})")]
    NotSectorial { margin: f64 },
    #[error("matrix is not semi-sectorial (margin {margin:.3e})")]
    NotSemiSectorial { margin: f64 },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid partition: split {r} of a {n}-port")]
    InvalidPartition { r: usize, n: usize },
    #[error("ill-defined result: {0}")]
    IllDefined(String),
    #[error("singular pivot: {0}")]
    SingularPivot(String),
    #[error("rational function has an identically zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at s = {re}{im:+}j")]
    PoleHit { re: f64, im: f64 },
    #[error("invalid frequency range: {0}")]
    InvalidRange(String),
    #[error("invalid phase interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("hull of phase intervals is wider than pi ({width:.6})")]
    HullTooWide { width: f64 },
    #[error("phase intervals overlap modulo 2pi")]
    Overlap,
    #[error("no sign choice gives a predicted interval narrower than pi")]
    NoValidSign,
    #[error("invalid confluence: {0}")]
    InvalidConfluence(String),
    #[error("parameter matrix is rank deficient (rank {rank} < {needed})")]
    RankDeficientParameter { rank: usize, needed: usize },
    #[error("connected network does not exist: {0}")]
    NotExists(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

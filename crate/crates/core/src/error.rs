use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ballot {row} is not a permutation of the {d} items")]
    InvalidBallot { row: usize, d: usize },
    #[error("profile has no ballots")]
    EmptyProfile,
    #[error("expected {expected} items but found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("at least two items are required, found {0}")]
    TooFewItems(usize),

    #[error("enumeration over {d} items exceeds the limit of {limit}; use the ascent engine")]
    DimensionTooLarge { d: usize, limit: usize },
    #[error("dispersion is zero: residual rank is exhausted")]
    ZeroDispersion,
    #[error("exact arithmetic overflowed while {0}")]
    Overflow(&'static str),
    #[error("sign vector has length {found}, expected {expected}")]
    SignLength { expected: usize, found: usize },

    #[error("voter {voter} has first-axis numerator {numerator} off the cluster lattice")]
    OffLattice { voter: usize, numerator: i128 },
    #[error("cluster {0} has no voters")]
    EmptyCluster(usize),
    #[error("dispersion {delta} exceeds the maximum {max} for this item partition")]
    OutOfRange { delta: String, max: String },
    #[error("item partition must be non-trivial (d1 = {d1}, d2 = {d2})")]
    TrivialPartition { d1: usize, d2: usize },

    #[error("the first cluster is incoherent; no coherent group can be extracted")]
    NoCoherentPrefix,

    #[error("census and marginals disagree on score {score}: census {census}, marginals {marginals}")]
    Inconsistent { score: usize, census: u64, marginals: u64 },

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: row is not a permutation of 0..{d}")]
    NonPermutationRow { line: usize, d: usize },
    #[error("no score multiset reaches the cluster index {alpha} (lattice has {slots} slots)")]
    InfeasibleAlpha { alpha: usize, slots: usize },
    #[error("map needs axis {0}, which was not computed")]
    MissingAxis(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Errors that indicate a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::OffLattice { .. } | Error::Overflow(_) | Error::Inconsistent { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use alloc::string::String;

/// Errors raised by the clustering core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} out of bounds for {len} points")]
    IndexOutOfBounds { index: usize, len: usize },

    #[error("pair ({0}, {0}) is a self-pair")]
    SelfPair(usize),

    #[error("invalid distance {value} for pair ({i}, {j})")]
    InvalidDistance { i: usize, j: usize, value: f64 },

    #[error("conflicting exact distances for pair ({i}, {j}): stored {stored}, new {new}")]
    ConflictingExact {
        i: usize,
        j: usize,
        stored: f64,
        new: f64,
    },

    #[error("pair ({i}, {j}) must be exact before cross-group estimation")]
    MissingExact { i: usize, j: usize },

    #[error("shortest path {path} undercuts exact edge {exact} for pair ({i}, {j})")]
    MetricViolation {
        i: usize,
        j: usize,
        exact: f64,
        path: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("cannot form {k} clusters from {n} points")]
    TooFewPoints { n: usize, k: usize },

    #[error("query ratio is undefined for {0} points")]
    TooFewPairs(usize),

    #[error("budget {budget} outside [0, {total}]")]
    BudgetOutOfRange { budget: usize, total: usize },

    #[error("medoid {0} is not a member of its own cluster")]
    MedoidNotInCluster(usize),

    #[error("non-finite feature at point {point}, dimension {dim}")]
    NonFiniteFeature { point: usize, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not place {k} centers {separation} apart after {attempts} attempts")]
    InfeasibleSeparation {
        k: usize,
        separation: f64,
        attempts: usize,
    },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

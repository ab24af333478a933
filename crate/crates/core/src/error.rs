//! Error type shared by every stage of the identification pipeline.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building, training, storing, or
/// evaluating a model.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field failed validation. Carries the field name and
    /// the reason so callers can report exactly what to fix.
    #[error("invalid config: field `{field}` {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    /// The dataset violates a structural requirement (empty, ragged rows,
    /// non-finite entries, ...).
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// A vector had the wrong length for the operation.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A coefficient vector was all zeros, so the hyperplane distance is
    /// undefined.
    #[error("coefficient vector is all zeros; hyperplane distance undefined")]
    ZeroCoefficients,

    /// A gradient or update became non-finite, which usually means the
    /// learning rate is too large for the data scale.
    #[error("non-finite {what} during SGD (divergent learning rate?)")]
    NonFinite { what: &'static str },

    /// Cluster geometry requested for an empty distance set.
    #[error("cannot compute cluster geometry from an empty distance set")]
    EmptyDistances,

    /// Every rule had zero upper firing strength, so type reduction has no
    /// support to average over.
    #[error("no rule fires: all upper firing strengths are zero")]
    NoRuleFires,

    /// Every data point was excluded as non-firing, leaving nothing to
    /// compute a loss or metric over.
    #[error("all points excluded: no rule fires on any data point")]
    AllPointsExcluded,

    /// R-squared is undefined when the actual values have zero variance.
    #[error("r2 undefined: actual values have zero variance")]
    ZeroVariance,

    /// A train/test split left one side empty.
    #[error("split produced an empty {side} side")]
    EmptySplit { side: &'static str },

    /// Brute-force type reduction is capped to keep 2^c enumerable.
    #[error("cluster count {got} exceeds brute-force cap {max}")]
    TooManyClusters { max: usize, got: usize },

    /// Model file could not be parsed (wrong version, truncation,
    /// corrupted field, ...).
    #[error("model format error: {0}")]
    ModelFormat(String),

    /// Experiment description file could not be parsed.
    #[error("experiment spec error: {0}")]
    ExperimentSpec(String),

    /// CSV ingestion failure that is not recoverable row-by-row.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Wraps an error with the pipeline stage it occurred in, so experiment
    /// runs report `partition: ...`, `consequent: ...`, and so on.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Tag an error with the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

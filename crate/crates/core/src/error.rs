use thiserror::Error;

/// Errors raised by the observer model and its ensemble wrapper.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("model has no observers")]
    EmptyModel,

    #[error("no observers in the requested pool")]
    EmptyPool,

    #[error("out-of-order timestamp: {t} is earlier than previous timestamp {previous}")]
    OutOfOrder { t: f64, previous: f64 },

    #[error("negative time step {0}")]
    NegativeTimeStep(f64),

    #[error("dimension mismatch: expected {expected} features, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("ensemble members disagree: {0}")]
    EnsembleMismatch(String),
}

/// Errors raised while encoding or decoding a model snapshot.
#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("unsupported snapshot format `{format}` version {version}")]
    Version { format: String, version: u32 },

    #[error("malformed snapshot: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Errors raised by the synthetic stream generator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid stream spec: {0}")]
    InvalidSpec(String),
}

/// Errors raised by the evaluation metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },

    #[error("metric needs both outliers and inliers, got {positives} outliers among {total}")]
    SingleClass { positives: usize, total: usize },

    #[error("outlier rate must lie strictly between 0 and 1, got {0}")]
    DegenerateRate(f64),
}

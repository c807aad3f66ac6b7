use thiserror::Error;

/// Errors produced anywhere in the ranking pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("schema error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema: {0}")]
    Schema(String),

    #[error("unknown column kind `{0}`")]
    UnknownKind(String),

    #[error("row {row}: value `{value}` is not a declared category of `{column}`")]
    UnknownCategory {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: cannot parse `{value}` in numeric column `{column}`")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: targets are partially missing")]
    PartialTarget { row: usize },

    #[error("row {row}: label `{label}` is relevant but its parent `{parent}` is not")]
    HierarchyViolation {
        row: usize,
        label: String,
        parent: String,
    },

    #[error("label hierarchy contains a cycle")]
    Cycle,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("no labeled examples available")]
    NoLabeled,

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("operation not supported for task {0}")]
    UnsupportedTask(String),

    #[error("random forest score unavailable: {0}")]
    RfUnavailable(String),

    #[error("numeric degeneracy: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

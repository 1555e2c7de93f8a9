use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV header mismatch: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },

    #[error("row {row}, field `{field}`: {message}")]
    Field {
        row: usize,
        field: &'static str,
        message: String,
    },

    #[error("malformed CSV")]
    Csv(#[from] csv::Error),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("combo {combo} needs `{field}`, missing on sample `{sample}`")]
    MissingField {
        combo: u8,
        field: &'static str,
        sample: String,
    },

    #[error("unknown combo id {0}, expected 1..=7")]
    UnknownCombo(u8),

    #[error("column {column} is constant ({value}); cannot normalize")]
    ConstantColumn { column: String, value: f64 },

    #[error("column index {index} out of range (have {len})")]
    ColumnOutOfRange { index: usize, len: usize },

    #[error("invalid range spec for `{param}`: {message}")]
    InvalidRangeSpec { param: String, message: String },

    #[error("invalid argument `{name}`: {message}")]
    InvalidArgument { name: &'static str, message: String },

    #[error("invalid network shape {sizes:?}: {message}")]
    InvalidShape { sizes: Vec<usize>, message: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid config `{field}`: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    #[error("objective returned non-finite value {value} at {point:?}")]
    NonFiniteObjective { value: f64, point: Vec<f64> },

    #[error("{series} has zero variance; correlation is undefined")]
    ZeroVariance { series: &'static str },

    #[error("prediction {index} is not positive ({value})")]
    NonPositivePrediction { index: usize, value: f64 },

    #[error("grid is empty")]
    EmptyGrid,

    #[error("provenance mismatch: {0}")]
    Provenance(String),

    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
}

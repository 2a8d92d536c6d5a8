//! Ingestion of the student-performance table.
//!
//! The flow is `parse_csv` → [`encode`] → [`LabeledDataset::from_encoded`] →
//! [`split`] → optional [`scale_features`]. Every categorical attribute is
//! encoded as a single ordinal column, so the 30 attributes stay 30 columns.

mod encode;
mod labeled;
mod matrix;
mod parse;
mod scale;
pub mod schema;
mod split;
pub mod synthetic;

pub use encode::{decode, encode, encode_attributes, CategoryTable, EncodingScheme};
pub use labeled::{bin_grade, GradeBins, LabeledDataset, CLASS_COUNT, CLASS_NAMES};
pub use matrix::DataMatrix;
pub use parse::{
    detect_delimiter, parse_attribute_rows, parse_csv, parse_csv_auto, AttributeRow, RawField,
    RawStudentRecord,
};
pub use scale::{scale_features, MinMaxScaler};
pub use split::{split, SplitDataset, SplitManifest};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("input is empty")]
    EmptyInput,
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: column {column}: unknown category {value:?}")]
    UnknownCategory {
        line: u64,
        column: String,
        value: String,
    },
    #[error("line {line}: column {column}: grade {value} outside 0..=20")]
    GradeOutOfRange {
        line: u64,
        column: String,
        value: i64,
    },
    #[error("grade {0} outside 0..=20")]
    GradeValue(i64),
    #[error("invalid grade bins: {0}")]
    InvalidBins(String),
    #[error("unknown encoding scheme version {0:?}")]
    UnknownScheme(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("duplicate column {0:?}")]
    DuplicateColumn(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("grade column {0} must not appear among the features")]
    Leakage(String),
    #[error("ratio out of range: {0}")]
    RatioOutOfRange(String),
    #[error("dataset too small: {0}")]
    DatasetTooSmall(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = DatasetError> = std::result::Result<T, E>;

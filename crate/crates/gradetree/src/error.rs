use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by schema parsing, ingestion, induction and model IO.
///
/// Row numbers in CSV errors are 1-based data rows (the header row is not
/// counted); config line numbers are 1-based file lines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config: missing required key `{0}`")]
    ConfigMissingKey(&'static str),

    #[error("config line {line}: duplicate attribute `{name}`")]
    DuplicateAttribute { line: usize, name: String },

    #[error("schema: {0}")]
    Schema(String),

    #[error("csv: missing column `{0}`")]
    MissingColumn(String),

    #[error("csv: unexpected column `{0}`")]
    UnexpectedColumn(String),

    #[error("csv row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("csv row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },

    #[error("csv row {row}, column `{column}`: missing value")]
    MissingValue { row: usize, column: String },

    #[error("mark {0} is not a finite, non-negative number")]
    InvalidMark(f64),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("record {index} (student {student_id}) has no target label")]
    UnlabeledRecord { index: usize, student_id: String },

    #[error("cannot induce a tree from an empty dataset")]
    EmptyDataset,

    #[error("record is missing attribute `{0}`")]
    MissingAttribute(String),

    #[error("invalid induction parameters: {0}")]
    InvalidParams(String),

    #[error("fail-rate threshold {0} is outside (0, 1]")]
    InvalidFailRateThreshold(f64),

    #[error("model: {0}")]
    Model(String),

    #[error("report: {0}")]
    Report(String),
}

use thiserror::Error;

pub type Result<T, E = ModalError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ModalError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("power spectrum must be positive, found C_{l} = {value}")]
    NonPositiveSpectrum { l: usize, value: f64 },

    #[error("non-finite table entry in {table} at flat index {index}")]
    NonFinite { table: &'static str, index: usize },

    #[error("P table needs {required} bytes but the budget allows {allowed} bytes")]
    BudgetExceeded { required: u64, allowed: u64 },

    #[error("Gauss-Legendre node {node} of {order} did not converge after {iterations} Newton steps")]
    NoConvergence {
        order: usize,
        node: usize,
        iterations: usize,
    },

    #[error("cannot merge partial matrices: {0}")]
    MergeMismatch(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors raised while reading the text and binary interchange formats.
///
/// Line numbers are 1-based and count the header line.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad header at line {line}: {reason}")]
    Header { line: usize, reason: String },

    #[error("malformed line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("duplicate triple at line {line}")]
    DuplicateTriple { line: usize },

    #[error("unordered triple at line {line}")]
    UnorderedTriple { line: usize },

    #[error("basis index {index} >= p_max {p_max} at line {line}")]
    IndexOutOfRange { line: usize, index: usize, p_max: usize },

    #[error("mode index out of sequence at line {line}: expected {expected}, found {found}")]
    OutOfSequence {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("count mismatch: header declares {declared}, found {found}")]
    CountMismatch { declared: usize, found: usize },

    #[error("missing section [{0}]")]
    MissingSection(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("array is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },

    #[error("N={n} not of form dM±1 with d>=2 and M>=3 (M={m})")]
    NotImprovedForm { n: usize, m: usize },

    #[error("M=1 retrieval out of scope")]
    DegenerateRetrieval,

    #[error("file length {len} is not a positive multiple of {granularity}")]
    Divisibility { len: usize, granularity: usize },

    #[error("invalid storage fractions: {0}")]
    InvalidAlpha(String),

    #[error("{what} index {index} out of range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

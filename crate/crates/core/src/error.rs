use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("panel too small: {rows} rows x {cols} columns")]
    EmptyPanel { rows: usize, cols: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteInput { row: usize, col: usize },

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("cokurtosis tensor for {n} assets exceeds the materialization cap of {max_n}")]
    TooLarge { n: usize, max_n: usize },

    #[error("rank deficient: requested {requested} components, numerical rank is {rank}")]
    RankDeficient { requested: usize, rank: usize },

    #[error("zero weight vector")]
    ZeroVector,

    #[error("component {0} failed to converge")]
    NoConvergence(usize),

    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("component {0} has zero variance")]
    ZeroVariance(usize),

    #[error("every component has |excess kurtosis| below the floor {floor}")]
    KurtosisNearZero { floor: f64 },

    #[error("requested {requested} components, only {available} available")]
    NotEnoughComponents { requested: usize, available: usize },

    #[error("portfolio has zero volatility")]
    ZeroVolatility,

    #[error("wrong component kind: expected {expected}")]
    WrongKind { expected: &'static str },

    #[error("Student-t degrees of freedom must exceed 4, got {0}")]
    InvalidDof(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("bucket {start}..={end} is empty")]
    EmptyBucket { start: NaiveDate, end: NaiveDate },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

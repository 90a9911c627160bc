//! Error type shared by the simulator, the statistics kernels and file I/O.

use std::fmt;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// The variants are grouped so a caller (the CLI in particular) can map them
/// onto coarse categories: configuration problems, I/O and parse failures,
/// and numerical/insufficient-data conditions.
#[derive(Debug)]
pub enum Error {
    /// Lattice side length out of range (`L >= 2`, and `L*L` must fit the
    /// index type used by the neighbour table).
    InvalidDimension { side: usize },
    /// A site coordinate outside the `L x L` grid.
    SiteOutOfRange { row: usize, col: usize, side: usize },
    /// A model or pipeline parameter failed validation.
    InvalidConfig(String),
    /// Not enough data for the requested statistic.
    InsufficientData(String),
    /// A sample with zero variance where a scale is required.
    DegenerateVariance(String),
    /// A price at or below zero where a logarithm is required.
    NonPositivePrice { index: usize, value: f64 },
    /// Sample size outside the supported range of a statistical routine.
    SampleSizeOutOfRange { n: usize, min: usize, max: usize },
    /// A named column is missing from a CSV header.
    MissingColumn { name: String, available: Vec<String> },
    /// A CSV row failed validation (bad number, bad date, ordering, ...).
    RowValidation { line: u64, message: String },
    /// The input held no usable rows or values.
    EmptyInput,
    /// A report was written with an incompatible schema version.
    SchemaMismatch { expected: u32, found: u32 },
    /// A file (PGM, CSV, JSON) did not have the expected shape.
    Parse(String),
    /// Filesystem error, annotated with the path involved.
    Io { path: PathBuf, source: std::io::Error },
    Csv(csv::Error),
    Json(serde_json::Error),
    /// A lower-level error wrapped with a note about what was being done.
    Context { what: String, source: Box<Error> },
}

impl Error {
    /// Wrap this error with a note about the operation that failed.
    pub fn with_context(self, what: impl Into<String>) -> Error {
        Error::Context { what: what.into(), source: Box::new(self) }
    }

    /// Open/read/write helper: attach the path to an `std::io::Error`.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { side } => {
                write!(f, "invalid lattice side length {side} (need 2 <= L and L*L < 2^32)")
            }
            Error::SiteOutOfRange { row, col, side } => {
                write!(f, "site ({row}, {col}) out of range for a {side}x{side} lattice")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
            Error::DegenerateVariance(msg) => write!(f, "degenerate variance: {msg}"),
            Error::NonPositivePrice { index, value } => {
                write!(f, "non-positive price {value} at index {index}")
            }
            Error::SampleSizeOutOfRange { n, min, max } => {
                write!(f, "sample size {n} outside supported range [{min}, {max}]")
            }
            Error::MissingColumn { name, available } => {
                write!(f, "column {name:?} not found; available columns: {available:?}")
            }
            Error::RowValidation { line, message } => {
                write!(f, "line {line}: {message}")
            }
            Error::EmptyInput => write!(f, "input contains no usable rows"),
            Error::SchemaMismatch { expected, found } => {
                write!(f, "report schema version {found} (this build reads version {expected})")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Error::Csv(e) => write!(f, "csv error: {e}"),
            Error::Json(e) => write!(f, "json error: {e}"),
            Error::Context { what, source } => write!(f, "{what}: {source}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Csv(e) => Some(e),
            Error::Json(e) => Some(e),
            Error::Context { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}

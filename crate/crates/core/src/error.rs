use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: cannot parse {text:?} as an ordinate")]
    Parse { line: usize, text: String },

    #[error("no ordinates")]
    Empty,

    #[error("ordinates not strictly increasing at index {index} ({prev} then {next})")]
    NotIncreasing { index: usize, prev: f64, next: f64 },

    #[error("non-positive or non-finite ordinate {value} at index {index}")]
    BadOrdinate { index: usize, value: f64 },

    #[error("gap of {gap} between ordinates {index} and {} exceeds sanity limit", .index + 1)]
    GapTooLarge { index: usize, gap: f64 },

    #[error("expected {expected} ordinates, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("corrupt zero cache: {0}")]
    Cache(String),

    #[error("{what} = {value} is outside the table range (max {max})")]
    OutOfRange { what: &'static str, value: f64, max: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("table too small: need n_max >= {required}, have {have}")]
    TableTooSmall { required: u64, have: u64 },

    #[error("no admissible point in [{n}, {}]: best separation {achieved} < required {required}", .n + 1)]
    NoSeparatedPoint { n: u64, achieved: f64, required: f64 },

    #[error("quadrature did not converge: estimate {value} with error {err_est} after {subdivisions} subdivisions")]
    Quadrature { value: f64, err_est: f64, subdivisions: usize },

    #[error("quadrature failed on gap [{a}, {b}]: {source}")]
    Gap {
        a: f64,
        b: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("t = {t} lies within {distance} of the zero at {ordinate}")]
    NearZero { t: f64, ordinate: f64, distance: f64 },

    #[error("cannot allocate table of {0} entries")]
    Resource(u64),

    #[error("normalization mismatch: {0}")]
    Normalization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

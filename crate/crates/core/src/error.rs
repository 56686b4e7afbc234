use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid bounds: a = {a} must be strictly below b = {b}")]
    InvalidBounds { a: f64, b: f64 },

    #[error("a grid needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("expected {expected} values for the grid, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("functions are defined on different grids")]
    GridMismatch,

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a density: {0}")]
    NotADensity(String),

    #[error("clr function must integrate to zero, got {0:e}")]
    NotCentered(f64),

    #[error("a sample needs at least 2 observations, got {0}")]
    SampleTooSmall(usize),

    #[error("degenerate sample: standard deviation is zero")]
    DegenerateSample,

    #[error("negative input {value} at index {index}")]
    NegativeInput { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series too short: need at least {needed} densities, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("no training density lies within bandwidth {h} of the query")]
    EmptyNeighborhood { h: f64 },

    #[error("forecast step {step} failed: {source}")]
    ForecastStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("no candidate bandwidth produced a finite cross-validation score")]
    NoValidCandidate,

    #[error("zero signal norm at t = {0}")]
    ZeroSignal(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("ragged matrix at line {line}: expected {expected} columns, got {got}")]
    RaggedMatrix {
        line: usize,
        expected: usize,
        got: usize,
    },

    #[error("negative entry {value} at line {line}")]
    NegativeEntry { line: usize, value: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse failure classes used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidBounds { .. } => {
                ErrorClass::Config
            }
            Error::TooFewPoints(_) => ErrorClass::Config,
            Error::EmptyNeighborhood { .. }
            | Error::NoValidCandidate
            | Error::ZeroSignal(_)
            | Error::Domain(_)
            | Error::NotCentered(_)
            | Error::NonFinite { .. } => ErrorClass::Numeric,
            Error::ForecastStep { source, .. } => source.class(),
            _ => ErrorClass::Data,
        }
    }

    /// Process exit code: 2 config, 3 data, 4 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numeric => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidBounds { .. } => "invalid-bounds",
            Error::TooFewPoints(_) => "too-few-points",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::GridMismatch => "grid-mismatch",
            Error::NonFinite { .. } => "non-finite",
            Error::Domain(_) => "domain-error",
            Error::NotADensity(_) => "not-a-density",
            Error::NotCentered(_) => "not-centered",
            Error::SampleTooSmall(_) => "sample-too-small",
            Error::DegenerateSample => "degenerate-sample",
            Error::NegativeInput { .. } => "negative-input",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::SeriesTooShort { .. } => "series-too-short",
            Error::EmptyNeighborhood { .. } => "empty-neighborhood",
            Error::ForecastStep { .. } => "forecast-step",
            Error::NoValidCandidate => "no-valid-candidate",
            Error::ZeroSignal(_) => "zero-signal",
            Error::Parse { .. } => "parse-error",
            Error::RaggedMatrix { .. } => "ragged-matrix",
            Error::NegativeEntry { .. } => "negative-entry",
            Error::Config(_) => "config-error",
            Error::Io(_) => "io-error",
            Error::Csv(_) => "csv-error",
        }
    }
}

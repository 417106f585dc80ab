use thiserror::Error;

/// Errors produced by the fitting library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated its documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("too few points: need at least {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    /// xs must be strictly increasing; `index` is the first offending position.
    #[error("x values must be strictly increasing (violated at index {index})")]
    NonIncreasingX { index: usize },

    /// A pivot fell below the relative singularity tolerance.
    #[error("singular linear system")]
    SingularSystem,

    /// The fitted log-domain curvature is not negative, so no Gaussian matches it.
    #[error("invalid curvature: coefficient {value} is not negative")]
    InvalidCurvature { value: f64 },

    #[error("maximum observation {value} is not positive")]
    NonPositivePeak { value: f64 },

    /// The Riemann-sum area under the samples is not positive.
    #[error("area under the observations {value} is not positive")]
    NonPositiveArea { value: f64 },

    /// `row` and `column` are 1-based.
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "InvalidInput",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::NonIncreasingX { .. } => "NonIncreasingX",
            Error::SingularSystem => "SingularSystem",
            Error::InvalidCurvature { .. } => "InvalidCurvature",
            Error::NonPositivePeak { .. } => "NonPositivePeak",
            Error::NonPositiveArea { .. } => "NonPositiveArea",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    /// True for errors that mean the fit itself broke down rather than the input.
    pub fn is_fit_failure(&self) -> bool {
        matches!(self, Error::SingularSystem | Error::InvalidCurvature { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

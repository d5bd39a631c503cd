use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value is not finite: {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("convergent recurrence overflows 64-bit integers after index {last_safe_index}")]
    ConvergentOverflow { last_safe_index: usize },

    #[error("continued fraction too short: need a denominator above {needed}, largest is {largest}; expand further")]
    InsufficientConvergents { needed: u64, largest: u64 },

    #[error("operation requires a one-dimensional point set, got dimension {0}")]
    DimensionMismatch(usize),

    #[error("cannot generate {requested} points: n*z loses more than 1e-9 absolute precision beyond n = {max_safe}; enable extended precision to override")]
    PrecisionExceeded { requested: u64, max_safe: u64 },

    #[error("three-gap prediction disagrees with the measured spectrum (predicted {predicted:?}, uncorrected multiplicities {as_printed:?}, observed {observed:?})")]
    PredictionMismatch {
        predicted: Vec<(f64, u64)>,
        as_printed: [i64; 3],
        observed: Vec<(f64, usize)>,
    },

    #[error("spectrum has {classes} distinct gap lengths, more than the supported {limit}; the input does not look like a finite-gap sequence")]
    TooManyGapLengths { classes: usize, limit: usize },

    #[error("N = {n} is too small for alpha = {alpha}: K^2 = {k_squared} exceeds N/2; use N >= {min_n}")]
    WindowTooSmall {
        n: usize,
        alpha: f64,
        k_squared: u64,
        min_n: usize,
    },

    #[error("exact multi-dimensional star discrepancy needs {cells} grid cells, over the budget of {budget}; use N <= {suggested_n} or the random-box lower bound")]
    BudgetExceeded {
        cells: f64,
        budget: f64,
        suggested_n: usize,
    },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

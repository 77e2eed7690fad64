use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Invalid argument: wrong dimension, non-finite value, violated precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// The objective does not provide the requested capability.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("direction is not a descent direction (slope {slope})")]
    NotDescent { slope: f64 },

    #[error("line optimization bracket never closed after {evaluations} evaluations")]
    UnboundedDirection { evaluations: usize },

    #[error("step-size search failed after {trials} trials")]
    SearchFailure { trials: usize },

    /// The gradient vanished; the caller should stop.
    #[error("stationary point reached")]
    Stationary,

    #[error("f(w) = {f_w} is below the supplied optimal value {f_star}")]
    InconsistentOptimum { f_w: f64, f_star: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

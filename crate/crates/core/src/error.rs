use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),

    /// A vector that must be normalised has (near) zero length.
    #[error("degenerate direction{}: norm {norm:e}", index.map(|i| format!(" at neuron {i}")).unwrap_or_default())]
    DegenerateDirection { index: Option<usize>, norm: f64 },

    #[error("singular metric: {0}")]
    SingularMetric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("edge {from} -> {to} has invalid weight {weight}")]
    InvalidWeight { from: usize, to: usize, weight: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at_step(step: usize, err: Error) -> Error {
        Error::AtStep {
            step,
            source: Box::new(err),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

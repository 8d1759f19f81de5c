use thiserror::Error;

/// Errors raised by the numerical and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error(
        "quadrature did not converge within {evaluations} evaluations \
         (value {value:e}, error estimate {abs_error:e})"
    )]
    NoConvergence {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },

    #[error("degenerate channel: legitimate channel vector has zero norm")]
    DegenerateChannel,

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

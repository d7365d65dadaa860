use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The frame set does not determine the state.
    #[error("informationally incomplete frame set: numerical rank {rank}, need {required}")]
    InformationallyIncomplete { rank: usize, required: usize },

    #[error("invalid channel: completeness residual {residual:.3e}")]
    InvalidChannel { residual: f64 },

    #[error("measurement outcome has zero probability ({prob:.3e})")]
    ZeroProbability { prob: f64 },

    /// A simplex relation evaluated at a point where it is undefined.
    #[error("undefined point: {0}")]
    UndefinedPoint(String),

    #[error("degenerate case: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

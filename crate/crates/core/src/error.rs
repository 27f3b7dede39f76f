use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument out of range: {what} (bound {bound})")]
    Range { what: String, bound: f64 },

    #[error("window {requested} leaves too much tail mass; need at least {required}")]
    TailTooLarge { requested: usize, required: usize },

    #[error("kernel truncation certificate failed; need a spread of at least {required}")]
    KernelTail { required: usize },

    #[error("{requested} spectral modes are not enough; need at least {required}")]
    InsufficientModes { requested: usize, required: usize },

    #[error("tail certificate unavailable: {0}")]
    TailCertificate(String),

    #[error("no envelope with alpha <= {ceiling} bounds the signal")]
    NoEnvelope { ceiling: f64 },

    #[error("second signal is not the time-1 evolution of the first (relative residual {residual:e})")]
    EvolutionMismatch { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

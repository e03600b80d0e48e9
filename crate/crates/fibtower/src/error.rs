use thiserror::Error;

/// Errors shared across the crate.
///
/// `PrecisionExhausted` is the canonical "the enclosure could not decide"
/// failure: it never silently degrades a certificate, it aborts it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("precision exhausted in {stage}: {detail}")]
    PrecisionExhausted { stage: &'static str, detail: String },

    #[error("initial bracket does not separate: {0}")]
    BracketFailure(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("monotonicity fault: {0}")]
    MonotonicityFault(String),

    #[error("path depth insufficient: {0}")]
    DepthInsufficient(String),

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub fn precision(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            stage,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

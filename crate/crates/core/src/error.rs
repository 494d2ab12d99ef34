use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A Hilbert space, site count or bond dimension exceeds a configured cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Inputs that are inconsistent with each other or out of range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A forced measurement outcome whose probability is numerically zero.
    #[error("outcome {label} has probability {probability:e}, below the 1e-14 floor")]
    ZeroProbabilityBranch { label: String, probability: f64 },

    /// Input is degenerate for the requested operation (zero norm, zero success probability).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A quantity whose defining formula divides by (numerically) zero.
    #[error("undefined parameter: {0}")]
    UndefinedParameter(String),

    /// A truncated Fock space is too small for the state it carries.
    #[error("truncation too small: population {leak:e} above n_max/2 exceeds 1e-8")]
    Truncation { leak: f64 },

    /// A decomposition or a post-condition check failed.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

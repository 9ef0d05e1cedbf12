use thiserror::Error;

/// Errors shared by all toolkit modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The Schwarzschild potential has a non-simple horizon root, e.g. the
    /// extremal Reissner–Nordström case |q| = mass.
    #[error("degenerate horizon: {0}")]
    DegenerateHorizon(String),

    #[error("operation requires a Schwarzschild-family space")]
    WrongKind,

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("weight must be positive: {0}")]
    NonPositiveWeight(String),

    #[error("test function has zero norm")]
    ZeroNorm,

    #[error("1/v is not integrable at infinity")]
    NonIntegrableTail,

    #[error("insufficient tail: {0}")]
    InsufficientTail(String),

    #[error("profile singular on the window: {0}")]
    ProfileSingularity(String),

    #[error("window too wide: {0}")]
    WindowTooWide(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

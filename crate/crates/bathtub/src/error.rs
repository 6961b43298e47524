//! Error type shared by every module, with a stable process exit code per
//! error class.

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error)]
pub enum BathtubError {
    /// An argument lies outside the mathematical domain of an operation
    /// (negative energy, non-positive mass, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A configuration file or command-line override could not be parsed or
    /// contained an unknown key.
    #[error("configuration error: {0}")]
    Config(String),

    /// The eigenvalue source does not cover the support of the energy window.
    #[error("incomplete eigenvalue coverage: {0}")]
    Coverage(String),

    /// A least-squares fit was too ill-conditioned to be trusted.
    #[error("fit is ill-conditioned (condition estimate {condition:.3e} > {limit:.1e})")]
    FitConditioning { condition: f64, limit: f64 },

    /// A root finder or bisection failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The time window of a trace-formula test pair contains periods other
    /// than the one it is supposed to isolate.
    #[error("isolation violated: {0}")]
    Isolation(String),

    /// The finite-difference oracle could not reach the requested accuracy.
    #[error("oracle accuracy not reached: {0}")]
    OracleAccuracy(String),

    /// A request outside the supported scope (e.g. multi-reflection orbits).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Failure reading a configuration file or writing an artifact.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl BathtubError {
    /// Process exit code for this error class. Codes are stable and distinct
    /// per class; `2` is left to the argument parser for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            BathtubError::Config(_) => 3,
            BathtubError::InvalidArgument(_) => 4,
            BathtubError::Coverage(_) => 5,
            BathtubError::FitConditioning { .. } => 6,
            BathtubError::Numerical(_) => 7,
            BathtubError::Isolation(_) => 8,
            BathtubError::OracleAccuracy(_) => 9,
            BathtubError::Unsupported(_) => 10,
            BathtubError::Io(_) => 11,
        }
    }

    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            BathtubError::Config(_) => "config",
            BathtubError::InvalidArgument(_) => "invalid_argument",
            BathtubError::Coverage(_) => "coverage",
            BathtubError::FitConditioning { .. } => "fit_conditioning",
            BathtubError::Numerical(_) => "numerical",
            BathtubError::Isolation(_) => "isolation",
            BathtubError::OracleAccuracy(_) => "oracle_accuracy",
            BathtubError::Unsupported(_) => "unsupported",
            BathtubError::Io(_) => "io",
        }
    }
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, BathtubError>;

/// Shorthand for building an [`BathtubError::InvalidArgument`].
pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(BathtubError::InvalidArgument(msg.into()))
}

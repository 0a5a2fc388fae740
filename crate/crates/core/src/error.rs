use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two routes that must agree did not.
    #[error("inconsistency: {0}")]
    Inconsistent(String),

    /// A material tensor lost ellipticity where it is required.
    #[error("ellipticity violated: {0}")]
    Ellipticity(String),

    /// A coefficient of the radial system vanished on a shell.
    #[error("singular radial coefficient at r = {radius}: {what}")]
    SingularCoefficient { radius: f64, what: String },

    /// The adaptive integrator could not make progress.
    #[error("step size underflow at r = {radius} (integrating towards {target})")]
    StepUnderflow { radius: f64, target: f64 },

    /// The exterior matching system is numerically singular for a mode.
    #[error("mode resonance at n = {n} ({pol}): matching determinant {det:e}")]
    Resonance { n: usize, pol: String, det: f64 },

    /// A lossless problem with a sign-changing shell was handed to the solver.
    #[error("sign-changing shell {shell} requires delta > 0")]
    SignChangingLossless { shell: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

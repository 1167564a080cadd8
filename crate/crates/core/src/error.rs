//! Error type shared by every module, with the CLI exit-code mapping.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration; `field` names the offending key.
    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computation could not reach its accuracy target.
    #[error("numerical accuracy error: {message} (error estimate {estimate:e})")]
    NumericalAccuracy { message: String, estimate: f64 },

    /// A grid is too coarse or too short for the requested evaluation.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Newton iteration failed to converge.
    #[error("root-find error at kappa = {kappa}: {message} (residual {residual:e})")]
    RootFind { kappa: f64, message: String, residual: f64 },

    /// Newton iteration converged outside the admissible disc around its seed.
    #[error("branch jump at kappa = {kappa}: root {root_re}{root_im:+}i is {distance:e} from the seed")]
    BranchJump { kappa: f64, root_re: f64, root_im: f64, distance: f64 },

    /// A pole sits too close to a contour quadrature node.
    #[error("contour collision at kappa = {kappa}: pole within {distance:e} of the contour")]
    ContourCollision { kappa: f64, distance: f64 },

    /// A least-squares fit could not be formed.
    #[error("fit error: {0}")]
    Fit(String),

    /// Filesystem failure while writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON serialization failure.
    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for a configuration error on a named field.
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    /// Shorthand for an accuracy failure carrying its error estimate.
    pub fn accuracy(message: impl Into<String>, estimate: f64) -> Self {
        Error::NumericalAccuracy { message: message.into(), estimate }
    }

    /// Process exit code for the CLI: 2 configuration, 3 numerical accuracy,
    /// 4 resolution, 5 root finding, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Domain(_) => 2,
            Error::NumericalAccuracy { .. } | Error::ContourCollision { .. } | Error::Fit(_) => 3,
            Error::Resolution(_) => 4,
            Error::RootFind { .. } | Error::BranchJump { .. } => 5,
            Error::Io(_) | Error::Serialize(_) => 1,
        }
    }
}

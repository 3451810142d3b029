//! Error type shared by every module.

use crate::simplex::GramFailure;

/// Errors raised by the geometry, classification and construction routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A schema or validation problem in a JSON simplex description.
    #[error("{path}: {message}")]
    Spec { path: String, message: String },

    #[error("singular system (smallest singular value {smallest_singular_value:e})")]
    SingularSystem { smallest_singular_value: f64 },

    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),

    #[error("geodesic ray is undefined: the point coincides with the center or its antipode")]
    DegenerateRay,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("enclosing ball radius {radius} is not below pi/2")]
    BallTooLarge { radius: f64 },

    #[error("not a Gram matrix: {0}")]
    NotAGram(GramFailure),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// `true` for errors caused by the caller's data rather than by the
    /// numerics; the CLI maps these to exit code 1.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NumericalFailure(_) | Error::SingularSystem { .. }
        )
    }

    /// Short machine-readable name used in structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::Spec { .. } => "spec",
            Error::SingularSystem { .. } => "singular_system",
            Error::DegenerateSimplex(_) => "degenerate_simplex",
            Error::DegenerateRay => "degenerate_ray",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::BallTooLarge { .. } => "ball_too_large",
            Error::NotAGram(_) => "not_a_gram",
            Error::NumericalFailure(_) => "numerical_failure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

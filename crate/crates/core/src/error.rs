use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The Gauss-Hermite rule cannot integrate the polynomial part exactly.
    #[error("quadrature rule has {got} nodes, at least {required} are needed")]
    InsufficientNodes { required: usize, got: usize },

    #[error("grid integration did not converge by {points} points per axis (last relative change {last_change:e})")]
    NotConverged { points: usize, last_change: f64 },

    #[error("singular covariance matrix")]
    SingularCovariance,

    #[error("unphysical state at t = {time}: symplectic eigenvalue {nu} < 1")]
    Unphysical { time: f64, nu: f64 },

    #[error("integrator step {step} exceeds the stability limit {limit}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    During { context: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::During { source, .. } => source.exit_code(),
            Error::InvalidInput(_) | Error::Config(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::DimensionMismatch { .. } | Error::StepTooLarge { .. } => 2,
            Error::InsufficientNodes { .. }
            | Error::NotConverged { .. }
            | Error::SingularCovariance
            | Error::Unphysical { .. } => 3,
        }
    }

    /// Wraps the error with a description of where it happened.
    pub fn during(self, context: impl Into<String>) -> Self {
        Error::During { context: context.into(), source: Box::new(self) }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("invalid unknown selection: {0}")]
    InvalidSelection(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("linear system is singular (pivot {pivot:e} below threshold {threshold:e})")]
    SingularSystem { pivot: f64, threshold: f64 },

    #[error("newton jacobian is singular at iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("newton did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("constraint residual {residual:e} exceeds tolerance {tolerance:e}")]
    ConstraintViolated { residual: f64, tolerance: f64 },

    #[error("time {t} is negative")]
    NegativeTime { t: f64 },

    #[error("closed form is singular at t = {t} (|1 + K t| = {modulus:e})")]
    SingularTime { t: f64, modulus: f64 },

    #[error("omega must be nonzero")]
    ZeroOmega,

    #[error("periodic bracket vanishes near t = {t} (|g| = {modulus:e})")]
    SingularBracket { t: f64, modulus: f64 },

    #[error("time grid too coarse near t = {t}: phase increment {increment:.4} exceeds pi/4")]
    GridTooCoarse { t: f64, increment: f64 },

    #[error("orbit did not close after {k} base periods (closure error {error:e})")]
    NotClosed { k: u64, error: f64 },

    #[error("step size {step:e} underflowed at t = {t}")]
    StepUnderflow { t: f64, step: f64 },

    #[error("exceeded {steps} steps at t = {t}")]
    MaxStepsExceeded { t: f64, steps: usize },

    #[error("{what}: {value:e} exceeds threshold {threshold:e}")]
    ToleranceFailure {
        what: String,
        value: f64,
        threshold: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 validation, 2 tolerance failure, 3 singularity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ToleranceFailure { .. }
            | Error::ConstraintViolated { .. }
            | Error::NoConvergence { .. }
            | Error::NotClosed { .. }
            | Error::MaxStepsExceeded { .. } => 2,
            Error::SingularSystem { .. }
            | Error::SingularJacobian { .. }
            | Error::SingularTime { .. }
            | Error::SingularBracket { .. }
            | Error::StepUnderflow { .. } => 3,
            _ => 1,
        }
    }
}

use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcsfError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("convexity lost: {0}")]
    ConvexityLost(String),
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("insufficient domain: {0}")]
    InsufficientDomain(String),
    #[error("solver diverged: {0}")]
    SolverDiverged(String),
}

impl GcsfError {
    /// Short machine-readable tag, used in manifests and sweep summaries.
    pub fn tag(&self) -> &'static str {
        match self {
            GcsfError::InvalidParameter(_) => "invalid-parameter",
            GcsfError::ConvexityLost(_) => "convexity-lost",
            GcsfError::StepRejected(_) => "step-rejected",
            GcsfError::InvalidInput(_) => "invalid-input",
            GcsfError::InsufficientDomain(_) => "insufficient-domain",
            GcsfError::SolverDiverged(_) => "solver-diverged",
        }
    }
}

pub type Result<T> = std::result::Result<T, GcsfError>;

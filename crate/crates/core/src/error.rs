use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0} (supported: 1, 2, 3)")]
    UnsupportedDimension(usize),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("intersection with the half-space has empty interior")]
    EmptyIntersection,
    #[error("NotNested: inner body is not contained in the outer body (excess {excess:.3e})")]
    NotNested { excess: f64 },
    #[error("misaligned apex and axis: {0}")]
    Misaligned(String),
    #[error("MisalignedNu: the Hausdorff pair is not parallel to the kernel axis (defect {defect:.3e})")]
    MisalignedNu { defect: f64 },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("DivergentKernel: {0}")]
    DivergentKernel(String),
    #[error("BudgetExceeded: reached {achieved:.3e} but requested {requested:.3e} ({samples} samples/nodes)")]
    BudgetExceeded { requested: f64, achieved: f64, samples: u64 },
    #[error("SingularEvaluation: {0}")]
    SingularEvaluation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("Infeasible: volume {w} exceeds the envelope capacity {cap}")]
    Infeasible { w: f64, cap: f64 },
    #[error("NonConvergence after {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("ConditionViolated at r={r}, R={big_r}, t={t} (margin {margin:.3e})")]
    ConditionViolated { r: f64, big_r: f64, t: f64, margin: f64 },
    #[error("Degenerate: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis size {size} exceeds the limit of {limit} states")]
    BasisTooLarge { size: u128, limit: usize },

    #[error("cutoff yields an empty basis")]
    EmptyBasis,

    #[error("mode {mode} out of range for a {modes}-mode basis")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("operands live on different bases")]
    BasisMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix exponential did not converge within {iterations} terms")]
    NonConvergence { iterations: usize },

    #[error("zero-norm state")]
    ZeroNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cutoff too small: tail mass {tail:e} exceeds tolerance {tol:e}")]
    CutoffTooSmall { tail: f64, tol: f64 },

    #[error("basis does not contain the required shell or representation: {0}")]
    ShellAbsent(String),

    #[error("conditioning shell carries zero probability mass")]
    ZeroMassShell,

    #[error("truncation leakage {leakage:e} exceeds {limit:e}")]
    ExcessiveLeakage { leakage: f64, limit: f64 },

    #[error("unknown name: {0}")]
    Unknown(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

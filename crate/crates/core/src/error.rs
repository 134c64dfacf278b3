use thiserror::Error;

pub type Result<T, E = GqcaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GqcaError {
    #[error("invalid gate parameters: {0}")]
    Parameter(String),

    #[error("lattice too small: {0}")]
    Size(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("schedule event #{index} (site {site}, step {step}) is not causally valid: {reason}")]
    Schedule {
        index: usize,
        site: usize,
        step: usize,
        reason: String,
    },

    #[error("geometry mismatch: {0}")]
    Geometry(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("incompatible time stepping: {0}")]
    Stepping(String),

    #[error("inconsistent phase ledger: {0}")]
    Ledger(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("channel is not completely positive: {0}")]
    CpViolation(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid lattice path: {0}")]
    Path(String),

    #[error("invalid density matrix: {0}")]
    Density(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown experiment `{0}` (try `gqca list`)")]
    UnknownExperiment(String),

    #[error("claim check failed: {0}")]
    ClaimFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GqcaError {
    /// Process exit code used by the command line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            GqcaError::ClaimFailed(_) => 2,
            GqcaError::Capacity(_) => 3,
            GqcaError::Config(_) | GqcaError::UnknownExperiment(_) => 4,
            _ => 1,
        }
    }
}

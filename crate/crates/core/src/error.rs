use thiserror::Error;

/// Errors shared across the physics modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too coarse: n_sites = {0}, need at least 4")]
    GridTooCoarse(usize),
    #[error("non-positive grid length: {0}")]
    NonPositiveLength(f64),
    #[error("fields live on different grids ({0} vs {1} sites)")]
    GridMismatch(usize, usize),
    #[error("CFL violated: c_s*dt/dx = {0:.4} exceeds 0.9")]
    CflViolation(f64),
    #[error("n_steps must be at least 1")]
    NoSteps,
    #[error("trajectory too short: omega*T = {got:.3} < {need:.3} for mode n = {mode}")]
    TrajectoryTooShort { mode: i64, got: f64, need: f64 },
    #[error("zero mode excluded: the q = 0 amplitude is singular")]
    ZeroMode,
    #[error("mode index {0} out of range for {1} sites")]
    ModeOutOfRange(i64, usize),
    #[error("empty mode list")]
    EmptyModes,
    #[error("Fock cutoff must be at least 1")]
    BadCutoff,
    #[error("basis dimension {0} exceeds limit {1}")]
    BasisTooLarge(usize, usize),
    #[error("mode index {0} not present in the basis")]
    UnknownMode(usize),
    #[error("incommensurate system lengths: {0} vs {1}")]
    Incommensurate(f64, f64),
    #[error("dense conversion refused at dimension {0} (limit {1})")]
    TooLargeForDense(usize, usize),
    #[error("near-degenerate unperturbed level: gap {gap:.3e} below {limit:.3e}")]
    NearDegenerate { gap: f64, limit: f64 },
    #[error("unstable time step: {0}")]
    UnstableStep(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

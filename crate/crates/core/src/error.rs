use thiserror::Error;

/// Errors raised by the linear algebra kernels, the solver and the
/// reconstruction pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty matrix")]
    Empty,

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("{0} factorization did not converge")]
    NoConvergence(&'static str),

    #[error("invalid channel instance: {0}")]
    InvalidInstance(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("pivot entry too small (|p| = {modulus:.3e})")]
    PivotTooSmall { modulus: f64 },

    #[error("probe indices must be distinct, got ({p}, {q}, {r})")]
    IndexCollision { p: usize, q: usize, r: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("degenerate state: minimum eigengap {gap:.3e} below threshold {threshold:.3e}")]
    DegenerateState { gap: f64, threshold: f64 },

    #[error("solver failed to converge (status {status}, objective {objective:.3e})")]
    SolverFailure { status: String, objective: f64 },

    #[error("phase product |alpha| = {modulus:.6} is not unimodular")]
    InconsistentPhase { modulus: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

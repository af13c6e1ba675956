//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by state construction, linear algebra, and the
/// experiment pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("subsystem `{0}` must have dimension >= 1")]
    ZeroDimension(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state vector has norm {norm:.17e}, expected 1 within {tol:.1e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("matrix is not Hermitian: max |A - A†| = {max_dev:.3e}")]
    NotHermitian { max_dev: f64 },

    #[error("matrix is not unitary: max |U†U - 1| = {max_dev:.3e}")]
    NotUnitary { max_dev: f64 },

    #[error("operator trace is {trace:.17e}, expected 1 within {tol:.1e}")]
    TraceNotOne { trace: f64, tol: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("subsystem selections overlap on `{0}`")]
    OverlappingLabels(String),

    #[error("empty subsystem selection")]
    EmptySelection,

    #[error("basis index {index} out of range for subsystem `{label}` (dim {dim})")]
    IndexOutOfRange {
        label: String,
        index: usize,
        dim: usize,
    },

    #[error("outcome {outcome} of subsystem `{label}` has zero probability")]
    ZeroProbability { label: String, outcome: usize },

    #[error("detector outcome must be 0 or 1, got {0}")]
    InvalidOutcome(usize),

    #[error("erasure angle {0:.17e} rad is outside [0, pi/4]")]
    AngleOutOfRange(f64),

    #[error("expected pipeline stage {expected}, got {actual}")]
    WrongStage {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("geometry parameter `{name}` must be positive, got {value:.17e}")]
    NonPositiveGeometry { name: &'static str, value: f64 },

    #[error("far-field approximation requires L/d >= 1000, got L/d = {0:.3e}")]
    NotFarField(f64),

    #[error("invalid screen grid: {0}")]
    InvalidGrid(String),

    #[error("eigensolver failed to converge after {sweeps} sweeps (off-norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

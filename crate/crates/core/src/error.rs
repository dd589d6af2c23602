use thiserror::Error;

/// Errors raised by state construction and the information-theoretic operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has zero dimension")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |A - A^dagger| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("trace is {trace}, expected 1")]
    InvalidTrace { trace: f64 },

    #[error("non-physical state: eigenvalue {value:e} is below the clamping window")]
    NegativeEigenvalue { value: f64 },

    #[error("state vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("basis is not orthonormal: max |<m|n> - delta_mn| = {defect:e}")]
    NotOrthonormal { defect: f64 },

    #[error("probability weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },

    #[error("probability weight at index {index} is not finite")]
    NonFiniteWeight { index: usize },

    #[error("probability weights sum to {sum}, expected 1")]
    InvalidNormalization { sum: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ensemble has no entries")]
    EmptyEnsemble,

    #[error("Hermitian eigensolver did not converge for a {dim}x{dim} matrix")]
    EigenNonConvergence { dim: usize },

    #[error("measurement operators are incomplete: max |sum M^dagger M - I| = {defect:e}")]
    IncompletePovm { defect: f64 },

    #[error("outcome {outcome} has probability {probability:e}; post-measurement state undefined")]
    ZeroProbabilityOutcome { outcome: usize, probability: f64 },

    #[error("outcome index {outcome} out of range for {count} outcomes")]
    OutcomeOutOfRange { outcome: usize, count: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hermite-Gauss index {q} exceeds the supported ceiling {max}")]
    ModeIndexTooLarge { q: usize, max: usize },

    #[error("overlap quadrature not converged: node doubling changed a coefficient by {change:e}")]
    QuadratureNotConverged { change: f64 },

    #[error("mode truncation inadequate at shift {theta}: overflow mass {overflow} at phi = {phi}")]
    TruncationInadequate { theta: f64, phi: f64, overflow: f64 },

    #[error("outcome {outcome} has zero marginal probability under the current distribution")]
    ImpossibleObservation { outcome: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

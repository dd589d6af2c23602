//! Dense complex linear algebra and the state and measurement primitives the
//! information-theoretic modules are built on.

mod entropy;
mod matrix;
pub mod random;
mod state;
mod sum;

pub use entropy::{
    decohere, measurement_probabilities, shannon_entropy, spectral_entropy, von_neumann_entropy,
    LogBase,
};
pub(crate) use entropy::shannon_nats;
pub use matrix::{
    hermitian_eigensystem, hermitian_eigenvalues, positive_inverse_sqrt, psd_sqrt,
    real_symmetric_eigenvalues, ComplexSquareMatrix, Eigensystem, C64, HERMITIAN_TOL,
};
pub use state::{
    DensityMatrix, ProbabilityDistribution, ProjectiveMeasurement, PureState, DISTRIBUTION_TOL,
    STATE_TOL,
};
pub use sum::{neumaier_sum, MatrixSum, NeumaierSum};

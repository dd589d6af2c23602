use nalgebra::{DMatrix, DVector};

use super::matrix::{hermitian_eigenvalues, ComplexSquareMatrix, C64, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Trace and eigenvalue tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Normalization tolerance for probability vectors.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes / C64::new(norm, 0.0))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&a| C64::new(a, 0.0)),
        ))
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix(ComplexSquareMatrix::outer(&self.0))
    }
}

/// Hermitian, positive semi-definite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexSquareMatrix);

impl DensityMatrix {
    /// Validates and symmetrizes. Asymmetry up to `1e-10` is absorbed by
    /// taking the Hermitian part; larger asymmetry is rejected.
    pub fn new(m: ComplexSquareMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let m = m.hermitian_part();
        let trace = m.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let values = hermitian_eigenvalues(&m)?;
        if let Some(&min) = values.first() {
            if min < -STATE_TOL {
                return Err(Error::NegativeEigenvalue { value: min });
            }
        }
        Ok(Self(m))
    }

    /// Skips validation. Only for operators that are density matrices by
    /// construction (convex mixtures, dephasings, isometric images).
    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        Self(ComplexSquareMatrix::new(m).expect("finite square matrix").hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexSquareMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix {
        &self.0
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        self.0.as_matrix()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let m = self.as_matrix();
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
}

/// Orthonormal basis `{|m>}`; column `m` of the stored unitary is `|m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: DMatrix<C64>,
}

impl ProjectiveMeasurement {
    pub fn new(vectors: &[PureState]) -> Result<Self> {
        let dim = vectors.first().map(PureState::dim).ok_or(Error::EmptyMatrix)?;
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: vectors.len() });
        }
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
        }
        let basis = DMatrix::from_fn(dim, dim, |r, c| vectors[c].amplitudes()[r]);
        Self::from_unitary(basis)
    }

    /// Columns of `u` are the basis vectors.
    pub fn from_unitary(u: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = u.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let gram = ComplexSquareMatrix::new(u.adjoint() * &u)?;
        let defect = gram.max_abs_diff(&ComplexSquareMatrix::identity(rows));
        if defect > STATE_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self { basis: u })
    }

    pub fn computational(dim: usize) -> Self {
        Self { basis: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.basis
    }

    pub fn vector(&self, m: usize) -> PureState {
        PureState(self.basis.column(m).into_owned())
    }

    /// `Π_m = |m><m|`.
    pub fn projector(&self, m: usize) -> ComplexSquareMatrix {
        ComplexSquareMatrix::outer(&self.basis.column(m).into_owned())
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: dim });
        }
        Ok(())
    }
}

/// Non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution(Vec<f64>);

impl ProbabilityDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidNormalization { sum: 0.0 });
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
        }
        let sum = super::sum::neumaier_sum(weights.iter().copied());
        if (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidNormalization { sum });
        }
        Ok(Self(weights))
    }

    /// Divides by the total. Rejects negative entries and a zero total.
    pub fn normalize(weights: Vec<f64>) -> Result<Self> {
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { index });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
        }
        let sum = super::sum::neumaier_sum(weights.iter().copied());
        if !(sum > 0.0) {
            return Err(Error::InvalidNormalization { sum });
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbabilityDistribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_norm_is_enforced() {
        assert!(PureState::from_real(&[1.0, 1.0]).is_err());
        let s = PureState::normalized(DVector::from_vec(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]))
            .unwrap();
        assert!((s.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_rejects_bad_trace_and_negative_spectrum() {
        let m = ComplexSquareMatrix::from_real_rows(2, &[0.6, 0.0, 0.0, 0.6]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidTrace { .. })));
        let m = ComplexSquareMatrix::from_real_rows(2, &[1.1, 0.0, 0.0, -0.1]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NegativeEigenvalue { .. })));
        let m = ComplexSquareMatrix::from_real_rows(2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_matrix_symmetrizes_small_asymmetry() {
        let m = ComplexSquareMatrix::from_real_rows(2, &[0.5, 0.2, 0.2 + 5e-11, 0.5]).unwrap();
        let rho = DensityMatrix::new(m).unwrap();
        assert_eq!(rho.matrix().hermiticity_defect(), 0.0);
    }

    #[test]
    fn projective_measurement_requires_orthonormal_basis() {
        let a = PureState::from_real(&[1.0, 0.0]).unwrap();
        let b = PureState::normalized(DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]))
            .unwrap();
        assert!(matches!(ProjectiveMeasurement::new(&[a.clone(), b]), Err(Error::NotOrthonormal { .. })));
        assert!(ProjectiveMeasurement::new(&[a]).is_err());
    }

    #[test]
    fn projectors_sum_to_identity() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = ProjectiveMeasurement::new(&[
            PureState::from_real(&[s, s]).unwrap(),
            PureState::from_real(&[s, -s]).unwrap(),
        ])
        .unwrap();
        let sum = m.projector(0).as_matrix() + m.projector(1).as_matrix();
        let sum = ComplexSquareMatrix::new(sum).unwrap();
        assert!(sum.max_abs_diff(&ComplexSquareMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn distribution_validation() {
        assert!(ProbabilityDistribution::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            ProbabilityDistribution::new(vec![1.5, -0.5]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            ProbabilityDistribution::new(vec![0.5, 0.6]),
            Err(Error::InvalidNormalization { .. })
        ));
        let p = ProbabilityDistribution::normalize(vec![1.0, 3.0]).unwrap();
        assert_eq!(p.weights(), &[0.25, 0.75]);
        assert!(ProbabilityDistribution::normalize(vec![0.0, 0.0]).is_err());
    }
}

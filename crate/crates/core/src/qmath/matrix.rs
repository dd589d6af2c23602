use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Tolerance on `max |A - A†|` for anything treated as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const EIGEN_MAX_SWEEPS_PER_DIM: usize = 1_000;

/// Dense complex `d x d` matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSquareMatrix(DMatrix<C64>);

impl ComplexSquareMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        for c in 0..cols {
            for r in 0..rows {
                let z = m[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a matrix from real entries given in row-major order.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        Self::new(DMatrix::from_fn(dim, dim, |r, c| C64::new(entries[r * dim + c], 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// Rank-one `|v><v|`.
    pub fn outer(v: &DVector<C64>) -> Self {
        Self(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// `max |A - A†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for c in 0..n {
            for r in 0..=c {
                worst = worst.max((self.0[(r, c)] - self.0[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Max-norm distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Spectral decomposition `A = U diag(values) U†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: DMatrix<C64>,
}

impl Eigensystem {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        self.map_spectrum(|x| x)
    }

    /// `U f(diag) U†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let fk = f(self.values[k]);
            scaled.column_mut(k).scale_mut(fk);
        }
        scaled * self.vectors.adjoint()
    }
}

fn hermitian_tolerance(a: &ComplexSquareMatrix) -> f64 {
    HERMITIAN_TOL * a.max_abs().max(1.0)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// The input is symmetrized before decomposition; inputs whose asymmetry
/// exceeds `1e-10` (relative to the largest entry, floor 1) are rejected.
pub fn hermitian_eigensystem(a: &ComplexSquareMatrix) -> Result<Eigensystem> {
    let defect = a.hermiticity_defect();
    if defect > hermitian_tolerance(a) {
        return Err(Error::NotHermitian { defect });
    }
    let dim = a.dim();
    let sym = a.hermitian_part().into_matrix();
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_SWEEPS_PER_DIM * dim)
        .ok_or(Error::EigenNonConvergence { dim })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &ComplexSquareMatrix) -> Result<Vec<f64>> {
    let defect = a.hermiticity_defect();
    if defect > hermitian_tolerance(a) {
        return Err(Error::NotHermitian { defect });
    }
    let dim = a.dim();
    let sym = a.hermitian_part().into_matrix();
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_SWEEPS_PER_DIM * dim)
        .ok_or(Error::EigenNonConvergence { dim })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Eigenvalues (ascending) of a real symmetric matrix, for the purely real
/// Hermite-Gauss ensembles where the complex path would double the work.
pub fn real_symmetric_eigenvalues(a: DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = a.nrows();
    let eig = SymmetricEigen::try_new(a, f64::EPSILON, EIGEN_MAX_SWEEPS_PER_DIM * dim)
        .ok_or(Error::EigenNonConvergence { dim })?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Principal square root of a positive semi-definite matrix. Eigenvalues in
/// `[-tol, 0)` are clamped to zero; anything more negative is rejected.
pub fn psd_sqrt(a: &ComplexSquareMatrix, tol: f64) -> Result<ComplexSquareMatrix> {
    let eig = hermitian_eigensystem(a)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    ComplexSquareMatrix::new(eig.map_spectrum(|x| x.max(0.0).sqrt()))
}

/// `A^{-1/2}` for a positive-definite matrix.
pub fn positive_inverse_sqrt(a: &ComplexSquareMatrix) -> Result<ComplexSquareMatrix> {
    let eig = hermitian_eigensystem(a)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min <= 0.0 {
        return Err(Error::DegenerateInput(format!(
            "inverse square root of a singular matrix (min eigenvalue {min:e})"
        )));
    }
    ComplexSquareMatrix::new(eig.map_spectrum(|x| 1.0 / x.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexSquareMatrix {
        let a = DMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        ComplexSquareMatrix::new(&a + a.adjoint()).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let eig = hermitian_eigensystem(&ComplexSquareMatrix::identity(2)).unwrap();
        assert_eq!(eig.values.len(), 2);
        for v in eig.values {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pauli_x_spectrum_and_vectors() {
        let sx = ComplexSquareMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let eig = hermitian_eigensystem(&sx).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // |down_x> = (1, -1)/sqrt 2 and |up_x> = (1, 1)/sqrt 2, up to phase.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let down = DVector::from_vec(vec![C64::new(s, 0.0), C64::new(-s, 0.0)]);
        let up = DVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]);
        assert!((eig.vectors.column(0).dotc(&down).norm() - 1.0).abs() < 1e-14);
        assert!((eig.vectors.column(1).dotc(&up).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_up_to_dim_16() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=16 {
            for _ in 0..5 {
                let a = random_hermitian(&mut rng, n);
                let eig = hermitian_eigensystem(&a).unwrap();
                let rec = ComplexSquareMatrix::new(eig.reconstruct()).unwrap();
                assert!(rec.max_abs_diff(&a) < 1e-9, "dim {n}");
                assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
                let gram = eig.vectors.adjoint() * &eig.vectors;
                let id = ComplexSquareMatrix::identity(n);
                assert!(ComplexSquareMatrix::new(gram).unwrap().max_abs_diff(&id) < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexSquareMatrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        match hermitian_eigensystem(&a) {
            Err(Error::NotHermitian { defect }) => assert!((defect - 1.0).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(
            ComplexSquareMatrix::new(DMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(ComplexSquareMatrix::new(m), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(&mut rng, 4);
        let psd = ComplexSquareMatrix::new(a.as_matrix() * a.as_matrix()).unwrap();
        let root = psd_sqrt(&psd, 1e-10).unwrap();
        let back = ComplexSquareMatrix::new(root.as_matrix() * root.as_matrix()).unwrap();
        assert!(back.max_abs_diff(&psd) < 1e-10);
        let inv = positive_inverse_sqrt(&psd).unwrap();
        let prod = inv.as_matrix() * psd.as_matrix() * inv.as_matrix();
        let id = ComplexSquareMatrix::identity(4);
        assert!(ComplexSquareMatrix::new(prod).unwrap().max_abs_diff(&id) < 1e-9);
    }
}

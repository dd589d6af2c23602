//! Seeded random states, bases and mixtures for property checks and the
//! verification harness.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::C64;
use super::state::{DensityMatrix, ProbabilityDistribution, ProjectiveMeasurement, PureState};

pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `rows x cols` matrix of i.i.d. complex Gaussians.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_pure_state(rng: &mut impl Rng, dim: usize) -> PureState {
    let v = ginibre(rng, dim, 1).column(0).into_owned();
    PureState::normalized(v).expect("Gaussian vector is nonzero")
}

/// Mixed state `G G† / tr(G G†)` with a `dim x rank` Ginibre factor.
pub fn random_density_matrix(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m / C64::new(tr, 0.0))
}

/// Haar-random orthonormal basis from the QR factor of a Ginibre matrix.
pub fn random_basis(rng: &mut impl Rng, dim: usize) -> ProjectiveMeasurement {
    let qr = ginibre(rng, dim, dim).qr();
    let q = qr.q();
    let r = qr.r();
    // Fix column phases so the distribution is Haar.
    let mut u = q.clone();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        u.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    ProjectiveMeasurement::from_unitary(u).expect("QR factor is unitary")
}

/// Uniform draw from the probability simplex.
pub fn random_distribution(rng: &mut impl Rng, n: usize) -> ProbabilityDistribution {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    ProbabilityDistribution::normalize(raw).expect("exponential draws are positive")
}

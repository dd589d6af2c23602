//! Binary discrimination of two pure qubit states on the Bloch sphere.
//!
//! The hypotheses are `ψ_0 = |↑x>` and
//! `ψ_θ = cos(θ/2)|↑x> + sin(θ/2)|↓x>` with equal prior. Their Bloch vectors
//! are `(1, 0, 0)` and `(cos θ, 0, sin θ)`, so both lie on the great circle
//! through the x and z axes. In-plane angles below are measured from `+x`
//! towards `+z`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::infotheory::{cxi_residual, ensemble_coherence, holevo_information, Ensemble};
use crate::povm::{povm_cxi_residual, povm_ensemble_coherence, povm_probabilities, Povm};
use crate::qmath::{
    hermitian_eigenvalues, ComplexSquareMatrix, DensityMatrix, ProbabilityDistribution,
    ProjectiveMeasurement, PureState, C64,
};

/// Default landscape resolution: 1° in polar angle, ~4° in azimuth.
pub const DEFAULT_GRID: (usize, usize) = (181, 91);
/// Separation angles of the three reference scenarios.
pub const REFERENCE_THETAS: [f64; 3] = [PI / 10.0, FRAC_PI_2, PI];

/// Unit vector on the Bloch sphere in spherical coordinates about `+z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDirection {
    polar: f64,
    azimuth: f64,
}

impl BlochDirection {
    pub fn new(polar: f64, azimuth: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&polar) {
            return Err(Error::InvalidParameter(format!("polar angle {polar} outside [0, π]")));
        }
        if !(0.0..TAU).contains(&azimuth) {
            return Err(Error::InvalidParameter(format!("azimuth {azimuth} outside [0, 2π)")));
        }
        Ok(Self { polar, azimuth })
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter("zero or non-finite Bloch vector".into()));
        }
        let polar = (v[2] / norm).clamp(-1.0, 1.0).acos();
        let mut azimuth = v[1].atan2(v[0]);
        if azimuth < 0.0 {
            azimuth += TAU;
        }
        if azimuth >= TAU {
            azimuth = 0.0;
        }
        Self::new(polar, azimuth)
    }

    /// Direction at angle `a` from `+x` towards `+z`.
    pub fn in_state_plane(a: f64) -> Self {
        Self::from_vector([a.cos(), 0.0, a.sin()]).expect("unit vector")
    }

    pub fn polar(&self) -> f64 {
        self.polar
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn vector(&self) -> [f64; 3] {
        let s = self.polar.sin();
        [s * self.azimuth.cos(), s * self.azimuth.sin(), self.polar.cos()]
    }

    /// Angle between the measurement axes through `self` and `other`,
    /// treating antipodes as the same axis. Lies in `[0, π/2]`.
    pub fn axis_angle(&self, other: &BlochDirection) -> f64 {
        let (a, b) = (self.vector(), other.vector());
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        dot.abs().min(1.0).acos()
    }
}

/// Equal-prior discrimination of `ρ_0` and `ρ_θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationProblem {
    theta: f64,
    ensemble: Ensemble,
}

impl DiscriminationProblem {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!("separation {theta} outside [0, π]")));
        }
        let ensemble = Ensemble::new(vec![
            crate::infotheory::EnsembleEntry {
                label: 0.0,
                probability: 0.5,
                state: rotated_state(0.0).density(),
            },
            crate::infotheory::EnsembleEntry {
                label: theta,
                probability: 0.5,
                state: rotated_state(theta).density(),
            },
        ])?;
        Ok(Self { theta, ensemble })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn holevo(&self) -> Result<f64> {
        holevo_information(&self.ensemble)
    }

    /// Ensemble coherence of the projective measurement along `d`.
    pub fn coherence(&self, d: &BlochDirection) -> Result<f64> {
        ensemble_coherence(&self.ensemble, &basis_from_direction(d))
    }
}

/// `cos(θ/2)|↑x> + sin(θ/2)|↓x>`.
pub fn rotated_state(theta: f64) -> PureState {
    let (s, c) = (theta / 2.0).sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    PureState::normalized(DVector::from_vec(vec![
        C64::new(r * (c + s), 0.0),
        C64::new(r * (c - s), 0.0),
    ]))
    .expect("nonzero amplitudes")
}

/// `{|+d>, |-d>}`.
pub fn basis_from_direction(d: &BlochDirection) -> ProjectiveMeasurement {
    let (s, c) = (d.polar / 2.0).sin_cos();
    let phase = C64::from_polar(1.0, d.azimuth);
    let plus = DVector::from_vec(vec![C64::new(c, 0.0), phase * s]);
    let minus = DVector::from_vec(vec![C64::new(s, 0.0), -phase * c]);
    let u = nalgebra::DMatrix::from_columns(&[plus, minus]);
    ProjectiveMeasurement::from_unitary(u).expect("orthonormal by construction")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeSample {
    pub polar_index: usize,
    pub azimuth_index: usize,
    pub direction: BlochDirection,
    pub coherence: f64,
    /// `coherence / χ`; zero when `χ` vanishes.
    pub normalized: f64,
}

/// Grid node `(i, j)` sits at polar `π i / (n_polar - 1)`, azimuth `2π j / n_azimuth`.
pub fn grid_direction(grid: (usize, usize), i: usize, j: usize) -> BlochDirection {
    let polar = PI * i as f64 / (grid.0 - 1) as f64;
    let azimuth = TAU * j as f64 / grid.1 as f64;
    BlochDirection { polar: polar.min(PI), azimuth }
}

/// Ensemble coherence at every grid node, ordered by polar then azimuth index.
pub fn coherence_landscape(
    problem: &DiscriminationProblem,
    grid: (usize, usize),
) -> Result<Vec<LandscapeSample>> {
    if grid.0 < 2 || grid.1 < 2 {
        return Err(Error::InvalidParameter(format!(
            "landscape grid {}x{} needs at least 2 points per axis",
            grid.0, grid.1
        )));
    }
    let chi = problem.holevo()?;
    (0..grid.0 * grid.1)
        .into_par_iter()
        .map(|node| {
            let (i, j) = (node / grid.1, node % grid.1);
            let direction = grid_direction(grid, i, j);
            let coherence = problem.coherence(&direction)?;
            let normalized = if chi > 1e-14 { coherence / chi } else { 0.0 };
            Ok(LandscapeSample { polar_index: i, azimuth_index: j, direction, coherence, normalized })
        })
        .collect()
}

/// First sample with the smallest coherence.
pub fn landscape_argmin(samples: &[LandscapeSample]) -> Option<&LandscapeSample> {
    samples.iter().fold(None, |best: Option<&LandscapeSample>, s| match best {
        Some(b) if b.coherence <= s.coherence => Some(b),
        _ => Some(s),
    })
}

/// In-plane angle `θ/2 + π/2` of the minimum-error basis vector `Π_θ`.
pub fn helstrom_angle(theta: f64) -> f64 {
    theta / 2.0 + FRAC_PI_2
}

pub fn helstrom_direction(theta: f64) -> BlochDirection {
    BlochDirection::in_state_plane(helstrom_angle(theta))
}

/// `Π_0 = ρ_{θ/2-π/2}`, `Π_θ = ρ_{θ/2+π/2}`.
pub fn helstrom_basis(theta: f64) -> ProjectiveMeasurement {
    let a = helstrom_angle(theta);
    ProjectiveMeasurement::new(&[rotated_state(a - PI), rotated_state(a)])
        .expect("antipodal states are orthonormal")
}

/// Ensemble coherence of the in-plane basis at angle `a`.
fn plane_coherence(problem: &DiscriminationProblem, a: f64) -> Result<f64> {
    problem.coherence(&BlochDirection::in_state_plane(a))
}

/// Minimum of `f` on `[lo, hi]` by golden-section search.
pub fn golden_section_min(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerically optimal in-plane basis angle, reduced to `[0, π)`.
///
/// Seeds with 360 samples over one half-turn (the basis at `a` and `a + π`
/// is the same), refines the best bracket by golden section, then polishes
/// with quadratic fits through three points. The last step matters for small
/// `θ`, where the landscape is so flat that comparing values alone stalls
/// around `1e-7` rad.
pub fn numeric_min_angle(problem: &DiscriminationProblem) -> Result<f64> {
    const SEEDS: usize = 360;
    let step = PI / SEEDS as f64;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..SEEDS {
        let a = k as f64 * step;
        let c = plane_coherence(problem, a)?;
        if c < best.1 {
            best = (a, c);
        }
    }
    let mut a = golden_section_min(|a| plane_coherence(problem, a), best.0 - step, best.0 + step, 1e-10)?;
    for h in [1e-2, 1e-3] {
        let (lo, mid, hi) = (plane_coherence(problem, a - h)?, plane_coherence(problem, a)?, plane_coherence(problem, a + h)?);
        let curvature = hi - 2.0 * mid + lo;
        if curvature > 0.0 {
            let shift = 0.5 * h * (lo - hi) / curvature;
            if shift.abs() < h {
                a += shift;
            }
        }
    }
    Ok(a.rem_euclid(PI))
}

/// Difference between two basis angles modulo `π`, in `[0, π/2]`.
pub fn basis_angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Helstrom success probability `½(tr Π_0 ρ_0 + tr Π_θ ρ_θ)`.
pub fn projective_success_probability(theta: f64) -> Result<f64> {
    let problem = DiscriminationProblem::new(theta)?;
    let basis = helstrom_basis(theta);
    let e = problem.ensemble().entries();
    let p0 = basis_probability(&e[0].state, &basis, 0);
    let p1 = basis_probability(&e[1].state, &basis, 1);
    Ok(0.5 * (p0 + p1))
}

fn basis_probability(rho: &DensityMatrix, m: &ProjectiveMeasurement, k: usize) -> f64 {
    (m.projector(k).as_matrix() * rho.as_matrix()).trace().re
}

/// `c = 1/λ_max(ρ_π + ρ_{θ+π})`.
pub fn usd_constant(theta: f64) -> Result<f64> {
    check_usd_theta(theta)?;
    let sum = rotated_state(PI).density().as_matrix() + rotated_state(theta + PI).density().as_matrix();
    let values = hermitian_eigenvalues(&ComplexSquareMatrix::new(sum)?)?;
    Ok(1.0 / values[values.len() - 1])
}

fn check_usd_theta(theta: f64) -> Result<()> {
    if theta == 0.0 {
        return Err(Error::DegenerateInput(
            "unambiguous discrimination of identical states (θ = 0)".into(),
        ));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!("separation {theta} outside (0, π]")));
    }
    Ok(())
}

/// Effects `{cρ_{θ+π}, cρ_π, I - c(ρ_{θ+π} + ρ_π)}` for outcomes `0`, `θ`, `?`.
pub fn usd_effects(theta: f64) -> Result<[ComplexSquareMatrix; 3]> {
    let c = usd_constant(theta)?;
    let m0 = rotated_state(theta + PI).density().matrix().scale(c);
    let mt = rotated_state(PI).density().matrix().scale(c);
    let inconclusive = ComplexSquareMatrix::identity(2).as_matrix() - m0.as_matrix() - mt.as_matrix();
    Ok([m0, mt, ComplexSquareMatrix::new(inconclusive)?.hermitian_part()])
}

/// The USD measurement with effects imported through square roots.
pub fn usd_povm(theta: f64) -> Result<Povm> {
    Povm::from_effects(&usd_effects(theta)?)
}

/// Probability of the inconclusive outcome on the equal mixture.
pub fn usd_inconclusive_probability(theta: f64) -> Result<f64> {
    let problem = DiscriminationProblem::new(theta)?;
    let p = usd_povm(theta)?;
    let mix = crate::infotheory::ensemble_state(problem.ensemble());
    Ok(povm_probabilities(&mix, &p)?[2])
}

/// `½(tr (M_0 + M_?/2) ρ_0 + tr (M_θ + M_?/2) ρ_θ)`: guess at random on `?`.
pub fn usd_success_probability(theta: f64) -> Result<f64> {
    let problem = DiscriminationProblem::new(theta)?;
    let p = usd_povm(theta)?;
    let e = problem.ensemble().entries();
    let q0: ProbabilityDistribution = povm_probabilities(&e[0].state, &p)?;
    let qt: ProbabilityDistribution = povm_probabilities(&e[1].state, &p)?;
    Ok(0.5 * ((q0[0] + 0.5 * q0[2]) + (qt[1] + 0.5 * qt[2])))
}

/// One row of the projective-vs-USD comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub theta: f64,
    pub chi: f64,
    /// Coherence of the best projective basis over `χ`.
    pub projective_normalized: f64,
    /// Coherence of the USD POVM over `χ`.
    pub usd_normalized: f64,
    pub projective_error: f64,
    pub usd_error: f64,
    pub projective_residual: f64,
    pub usd_residual: f64,
}

pub fn comparison_row(theta: f64) -> Result<ComparisonRow> {
    let problem = DiscriminationProblem::new(theta)?;
    let chi = problem.holevo()?;
    let basis = helstrom_basis(theta);
    let usd = usd_povm(theta)?;
    let projective = ensemble_coherence(problem.ensemble(), &basis)?;
    let usd_coherence = povm_ensemble_coherence(problem.ensemble(), &usd)?;
    Ok(ComparisonRow {
        theta,
        chi,
        projective_normalized: projective / chi,
        usd_normalized: usd_coherence / chi,
        projective_error: 1.0 - projective_success_probability(theta)?,
        usd_error: 1.0 - usd_success_probability(theta)?,
        projective_residual: cxi_residual(problem.ensemble(), &basis)?,
        usd_residual: povm_cxi_residual(problem.ensemble(), &usd)?,
    })
}

/// Rows for every `θ` in `(0, π]`, in input order.
pub fn coherence_vs_theta_report(thetas: &[f64]) -> Result<Vec<ComparisonRow>> {
    thetas.par_iter().map(|&t| comparison_row(t)).collect()
}

/// `n` evenly spaced separations ending at `π`: `π k / n` for `k = 1..=n`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| PI * k as f64 / n as f64).collect()
}

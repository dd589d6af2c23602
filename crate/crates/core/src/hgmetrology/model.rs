use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::grid::SourceGrid;
use super::modes::{fill_hg_modes, photon_wavefunction, Quadrature, MAX_MODE_INDEX};
use crate::error::{Error, Result};
use crate::infotheory::{Ensemble, EnsembleEntry};
use crate::qmath::{
    real_symmetric_eigenvalues, shannon_nats, spectral_entropy, DensityMatrix, NeumaierSum,
    PureState, C64,
};

/// Overflow mass above which a model is rejected.
pub const MAX_OVERFLOW: f64 = 0.05;
/// Largest change in any overlap coefficient tolerated when the node count doubles.
pub const QUADRATURE_TOL: f64 = 1e-8;
/// Source positions with less weight than this are left out of `S(ρ_Φ)`.
const SUPPORT_CUTOFF: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HgConfig {
    /// Width `σ_h` of the measurement modes.
    pub sigma_h: f64,
    /// Truncation `N_HG`; outcomes are modes `0..n_modes` plus one overflow outcome.
    pub n_modes: usize,
    pub quadrature_nodes: usize,
    pub quadrature_half_width: f64,
}

impl Default for HgConfig {
    fn default() -> Self {
        Self { sigma_h: 2.0, n_modes: 20, quadrature_nodes: 400, quadrature_half_width: 30.0 }
    }
}

impl HgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_h.is_finite() && self.sigma_h > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma_h must be positive, got {}", self.sigma_h)));
        }
        if self.n_modes == 0 {
            return Err(Error::InvalidParameter("n_modes must be at least 1".into()));
        }
        if self.n_modes > MAX_MODE_INDEX + 1 {
            return Err(Error::ModeIndexTooLarge { q: self.n_modes - 1, max: MAX_MODE_INDEX });
        }
        if self.quadrature_nodes == 0 {
            return Err(Error::InvalidParameter("quadrature_nodes must be at least 1".into()));
        }
        Ok(())
    }

    pub fn quadrature(&self) -> Result<Quadrature> {
        Quadrature::new(self.quadrature_nodes, self.quadrature_half_width)
    }
}

/// `c_q = ∫ h_q(x-θ) ψ_φ(x) dx` for every grid position, as an `n_modes x n_phis` matrix.
fn overlap_matrix(phis: &[f64], theta: f64, cfg: &HgConfig, quad: &Quadrature) -> DMatrix<f64> {
    let n = cfg.n_modes;
    let mut modes = DMatrix::zeros(n, quad.len());
    let mut buf = Vec::with_capacity(n);
    for (k, (&x, &w)) in quad.nodes().iter().zip(quad.weights()).enumerate() {
        fill_hg_modes(&mut buf, n, x - theta, cfg.sigma_h);
        for q in 0..n {
            modes[(q, k)] = w * buf[q];
        }
    }
    let wave = DMatrix::from_fn(quad.len(), phis.len(), |k, i| photon_wavefunction(quad.nodes()[k], phis[i]));
    modes * wave
}

fn validated_overlaps(phis: &[f64], theta: f64, cfg: &HgConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    let quad = cfg.quadrature()?;
    let coarse = overlap_matrix(phis, theta, cfg, &quad);
    let fine = overlap_matrix(phis, theta, cfg, &quad.doubled());
    let change = (&coarse - &fine).abs().max();
    if !(change <= QUADRATURE_TOL) {
        return Err(Error::QuadratureNotConverged { change });
    }
    Ok(coarse)
}

/// Overlaps `c_0 .. c_{N-1}` of the photon at `phi` with the modes shifted by `theta`.
pub fn overlap_coefficients(phi: f64, theta: f64, cfg: &HgConfig) -> Result<Vec<f64>> {
    Ok(validated_overlaps(&[phi], theta, cfg)?.column(0).iter().copied().collect())
}

/// Outcome statistics and amplitudes for measurement in the modes shifted by `θ`.
///
/// Row `m < n_modes` is mode `m`; the last row is the overflow outcome
/// carrying `1 - Σ c_q²`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementModel {
    theta: f64,
    amplitudes: DMatrix<f64>,
    probabilities: DMatrix<f64>,
    outcome_entropies: Vec<f64>,
    /// `<ψ_i|ψ_j>` between source positions.
    gram: DMatrix<f64>,
    max_overflow: f64,
}

impl MeasurementModel {
    pub fn new(phis: &[f64], theta: f64, cfg: &HgConfig) -> Result<Self> {
        let c = validated_overlaps(phis, theta, cfg)?;
        let n = cfg.n_modes;
        let mut amplitudes = DMatrix::zeros(n + 1, phis.len());
        let mut max_overflow: f64 = 0.0;
        for (i, &phi) in phis.iter().enumerate() {
            let mass = c.column(i).norm_squared();
            if mass > 1.0 + QUADRATURE_TOL {
                return Err(Error::QuadratureNotConverged { change: mass - 1.0 });
            }
            let overflow = (1.0 - mass).max(0.0);
            if overflow > MAX_OVERFLOW {
                return Err(Error::TruncationInadequate { theta, phi, overflow });
            }
            max_overflow = max_overflow.max(overflow);
            amplitudes.view_mut((0, i), (n, 1)).copy_from(&c.column(i));
            amplitudes[(n, i)] = overflow.sqrt();
            let norm = amplitudes.column(i).norm();
            amplitudes.column_mut(i).unscale_mut(norm);
        }
        let probabilities = amplitudes.map(|a| a * a);
        let outcome_entropies = probabilities
            .column_iter()
            .map(|col| shannon_nats(col.as_slice()))
            .collect();
        let gram = amplitudes.transpose() * &amplitudes;
        Ok(Self { theta, amplitudes, probabilities, outcome_entropies, gram, max_overflow })
    }

    pub fn for_grid(grid: &SourceGrid, theta: f64, cfg: &HgConfig) -> Result<Self> {
        Self::new(grid.phis(), theta, cfg)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n_outcomes(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn n_phis(&self) -> usize {
        self.amplitudes.ncols()
    }

    /// Real amplitude of source position `i` on outcome `m`.
    pub fn amplitudes(&self) -> &DMatrix<f64> {
        &self.amplitudes
    }

    /// `p(m|φ_i)` at `(m, i)`; every column sums to one.
    pub fn probabilities(&self) -> &DMatrix<f64> {
        &self.probabilities
    }

    /// Likelihood row `p(m|·)`.
    pub fn likelihood(&self, m: usize) -> Vec<f64> {
        self.probabilities.row(m).iter().copied().collect()
    }

    /// Outcome distribution `p(·|φ_i)`.
    pub fn conditional(&self, i: usize) -> &[f64] {
        let rows = self.probabilities.nrows();
        &self.probabilities.as_slice()[i * rows..(i + 1) * rows]
    }

    pub fn max_overflow(&self) -> f64 {
        self.max_overflow
    }

    /// Coherence, Holevo information and mutual information for weights `w`.
    ///
    /// The states are pure, so `χ = S(ρ_Φ)` and
    /// `C = Σ w_i H(p(·|φ_i)) - H(Σ w_i p(·|φ_i)) + S(ρ_Φ)`.
    pub fn information(&self, w: &[f64]) -> Result<InformationSplit> {
        if w.len() != self.n_phis() {
            return Err(Error::DimensionMismatch { expected: self.n_phis(), found: w.len() });
        }
        let mut conditional = NeumaierSum::new();
        for (wi, hi) in w.iter().zip(&self.outcome_entropies) {
            conditional.add(wi * hi);
        }
        let wv = DVector::from_column_slice(w);
        let marginal = &self.probabilities * &wv;
        let h_marginal = shannon_nats(marginal.as_slice());
        let holevo = spectral_entropy(&real_symmetric_eigenvalues(self.mixture_operator(w))?)?;
        let conditional = conditional.value();
        Ok(InformationSplit {
            coherence: conditional - h_marginal + holevo,
            holevo,
            mutual_information: h_marginal - conditional,
        })
    }

    /// A real symmetric matrix with the nonzero spectrum of `ρ_Φ`: either
    /// `ρ_Φ` itself or, when the weights are concentrated on fewer positions
    /// than there are outcomes, the weighted Gram matrix on that support.
    fn mixture_operator(&self, w: &[f64]) -> DMatrix<f64> {
        let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > SUPPORT_CUTOFF).collect();
        if support.len() < self.n_outcomes() {
            let s = support.len();
            return DMatrix::from_fn(s, s, |a, b| {
                let (i, j) = (support[a], support[b]);
                (w[i] * w[j]).sqrt() * self.gram[(i, j)]
            });
        }
        let mut scaled = self.amplitudes.clone();
        for (i, mut col) in scaled.column_iter_mut().enumerate() {
            col *= w[i].sqrt();
        }
        &scaled * scaled.transpose()
    }

    pub fn coherence(&self, w: &[f64]) -> Result<f64> {
        Ok(self.information(w)?.coherence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InformationSplit {
    pub coherence: f64,
    pub holevo: f64,
    pub mutual_information: f64,
}

/// `p(m|φ)` for all outcomes and positions.
pub fn measurement_model(grid: &SourceGrid, theta: f64, cfg: &HgConfig) -> Result<MeasurementModel> {
    MeasurementModel::for_grid(grid, theta, cfg)
}

/// The photon ensemble expressed in the shifted-mode outcome basis.
///
/// Each state is the pure amplitude vector of one source position, with the
/// overflow amplitude on the last axis. Measuring in the computational basis
/// of this space reproduces the model's statistics.
pub fn hg_ensemble(grid: &SourceGrid, theta: f64, cfg: &HgConfig) -> Result<Ensemble> {
    let model = measurement_model(grid, theta, cfg)?;
    let entries = grid
        .phis()
        .iter()
        .zip(grid.weights())
        .enumerate()
        .map(|(i, (&phi, &p))| {
            let v = model.amplitudes().column(i).map(|a| C64::new(a, 0.0));
            let state: DensityMatrix = PureState::normalized(v)?.density();
            Ok(EnsembleEntry { label: phi, probability: p, state })
        })
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgmetrology::grid::default_prior;
    use crate::infotheory::{cxi_residual, ensemble_coherence, holevo_information};
    use crate::qmath::ProjectiveMeasurement;

    #[test]
    fn ground_mode_overlap_closed_form() {
        let cfg = HgConfig::default();
        let c = overlap_coefficients(0.0, 0.0, &cfg).unwrap();
        assert!((c[0] - 2.0 / 5f64.sqrt()).abs() < 1e-10);
        for q in (1..20).step_by(2) {
            assert!(c[q].abs() < 1e-12);
        }
        // Off-centre: √(2·1·2/(1+4)) exp(-d²/(4(1+4))).
        for &d in &[0.5, -1.7, 3.0] {
            let c = overlap_coefficients(d, 0.0, &cfg).unwrap();
            let expected = (4.0f64 / 5.0).sqrt() * (-d * d / 20.0).exp();
            assert!((c[0] - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn overlaps_are_shift_covariant() {
        let cfg = HgConfig::default();
        let a = overlap_coefficients(0.8, -1.3, &cfg).unwrap();
        let b = overlap_coefficients(2.1, 0.0, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(a.iter().map(|c| c * c).sum::<f64>() <= 1.0 + 1e-8);
    }

    #[test]
    fn truncation_is_adequate_over_the_plotted_range() {
        let g = default_prior();
        let cfg = HgConfig::default();
        for &t in &[-5.0, -2.5, 0.0, 4.0, 5.0] {
            let m = measurement_model(&g, t, &cfg).unwrap();
            assert!(m.max_overflow() < 0.01, "{t}: {}", m.max_overflow());
            for i in 0..m.n_phis() {
                assert!((m.conditional(i).iter().sum::<f64>() - 1.0).abs() < 1e-14);
            }
        }
        let tiny = HgConfig { n_modes: 2, ..cfg };
        assert!(matches!(measurement_model(&g, 5.0, &tiny), Err(Error::TruncationInadequate { .. })));
    }

    #[test]
    fn unshifted_model_cannot_tell_mirror_positions_apart() {
        let g = default_prior();
        let m = measurement_model(&g, 0.0, &HgConfig::default()).unwrap();
        let n = m.n_phis();
        for i in 0..n {
            for (a, b) in m.conditional(i).iter().zip(m.conditional(n - 1 - i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fast_path_agrees_with_generic_ensemble_route() {
        let g = default_prior();
        let cfg = HgConfig::default();
        for &t in &[0.0, 1.1, -2.3, 4.6] {
            let model = measurement_model(&g, t, &cfg).unwrap();
            let split = model.information(g.weights()).unwrap();
            let e = hg_ensemble(&g, t, &cfg).unwrap();
            let basis = ProjectiveMeasurement::computational(cfg.n_modes + 1);
            let generic = ensemble_coherence(&e, &basis).unwrap();
            assert!((split.coherence - generic).abs() < 1e-10, "{t}");
            assert!((split.holevo - holevo_information(&e).unwrap()).abs() < 1e-10);
            assert!(cxi_residual(&e, &basis).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn concentrated_weights_use_the_gram_route() {
        let g = default_prior();
        let cfg = HgConfig::default();
        let model = measurement_model(&g, 0.7, &cfg).unwrap();
        let mut w = vec![0.0; 50];
        w[10] = 0.2;
        w[11] = 0.5;
        w[30] = 0.3;
        let fast = model.information(&w).unwrap();
        let post = g.with_weights(crate::qmath::ProbabilityDistribution::new(w).unwrap()).unwrap();
        let e = hg_ensemble(&post, 0.7, &cfg).unwrap();
        let basis = ProjectiveMeasurement::computational(cfg.n_modes + 1);
        assert!((fast.coherence - ensemble_coherence(&e, &basis).unwrap()).abs() < 1e-10);
        assert!((fast.holevo - holevo_information(&e).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn quadrature_failure_is_reported() {
        let cfg = HgConfig { quadrature_nodes: 12, ..HgConfig::default() };
        assert!(matches!(
            overlap_coefficients(0.0, 0.0, &cfg),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }
}

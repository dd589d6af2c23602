use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{neumaier_sum, ProbabilityDistribution};

/// Two equal Gaussian bumps at `±center`, sampled on an even grid and normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriorConfig {
    pub n_points: usize,
    pub half_range: f64,
    pub center: f64,
    /// Standard deviation of each bump.
    pub component_std: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        Self { n_points: 50, half_range: 2.0, center: 1.0, component_std: 0.25 }
    }
}

impl PriorConfig {
    /// Bumps of standard deviation 1/2, as in the written-out mixture formula.
    pub fn wide() -> Self {
        Self { component_std: 0.5, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::InvalidParameter("prior grid needs at least 2 points".into()));
        }
        for (name, v) in [("half_range", self.half_range), ("component_std", self.component_std)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("prior {name} must be positive, got {v}")));
            }
        }
        if !self.center.is_finite() {
            return Err(Error::InvalidParameter("prior center must be finite".into()));
        }
        Ok(())
    }
}

/// Source positions `φ_i` with a distribution over them.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceGrid {
    phis: Vec<f64>,
    weights: ProbabilityDistribution,
}

/// `n` evenly spaced points on `[-half_range, half_range]`, mirror-exact.
pub fn symmetric_points(n: usize, half_range: f64) -> Vec<f64> {
    let step = 2.0 * half_range / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let j = n - 1 - i;
            if i <= j {
                -half_range + step * i as f64
            } else {
                half_range - step * j as f64
            }
        })
        .collect()
}

impl SourceGrid {
    pub fn new(phis: Vec<f64>, weights: ProbabilityDistribution) -> Result<Self> {
        if phis.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: phis.len(), found: weights.len() });
        }
        if phis.len() < 2 {
            return Err(Error::InvalidParameter("source grid needs at least 2 points".into()));
        }
        let step = phis[1] - phis[0];
        for w in phis.windows(2) {
            let d = w[1] - w[0];
            if !(d > 0.0) || (d - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::InvalidParameter(
                    "source positions must be strictly increasing and evenly spaced".into(),
                ));
            }
        }
        Ok(Self { phis, weights })
    }

    pub fn two_peak(cfg: &PriorConfig) -> Result<Self> {
        cfg.validate()?;
        let phis = symmetric_points(cfg.n_points, cfg.half_range);
        let s2 = 2.0 * cfg.component_std * cfg.component_std;
        let raw: Vec<f64> = phis
            .iter()
            .map(|&p| {
                0.5 * ((-(p + cfg.center).powi(2) / s2).exp() + (-(p - cfg.center).powi(2) / s2).exp())
            })
            .collect();
        Self::new(phis, ProbabilityDistribution::normalize(raw)?)
    }

    /// All mass on position `index`.
    pub fn delta(phis: Vec<f64>, index: usize) -> Result<Self> {
        let mut w = vec![0.0; phis.len()];
        *w.get_mut(index).ok_or(Error::OutcomeOutOfRange { outcome: index, count: phis.len() })? = 1.0;
        Self::new(phis, ProbabilityDistribution::new(w)?)
    }

    pub fn with_weights(&self, weights: ProbabilityDistribution) -> Result<Self> {
        Self::new(self.phis.clone(), weights)
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.weights()
    }

    pub fn distribution(&self) -> &ProbabilityDistribution {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    /// `max |w(φ_i) - w(-φ_i)|`, pairing grid points by mirror index.
    pub fn asymmetry(&self) -> f64 {
        let w = self.weights();
        let n = w.len();
        (0..n).map(|i| (w[i] - w[n - 1 - i]).abs()).fold(0.0, f64::max)
    }
}

/// The default two-peak prior on 50 points in `[-2, 2]`.
pub fn default_prior() -> SourceGrid {
    SourceGrid::two_peak(&PriorConfig::default()).expect("default prior is valid")
}

/// `p(φ|m) ∝ p(m|φ) p(φ)` given the likelihood row `p(m|·)`.
pub fn bayes_update_row(grid: &SourceGrid, likelihood: &[f64], outcome: usize) -> Result<SourceGrid> {
    if likelihood.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), found: likelihood.len() });
    }
    let joint: Vec<f64> = grid.weights().iter().zip(likelihood).map(|(w, l)| w * l).collect();
    let marginal = neumaier_sum(joint.iter().copied());
    if !(marginal > 1e-300) {
        return Err(Error::ImpossibleObservation { outcome });
    }
    let posterior = joint.into_iter().map(|j| j / marginal).collect();
    grid.with_weights(ProbabilityDistribution::new(posterior)?)
}

/// `φ̂ = Σ φ p(φ)`.
pub fn mmse_estimate(grid: &SourceGrid) -> f64 {
    let lo = grid.phis[0];
    let hi = grid.phis[grid.len() - 1];
    neumaier_sum(grid.phis.iter().zip(grid.weights()).map(|(p, w)| p * w)).clamp(lo, hi)
}

/// `e = Σ (φ̂ - φ)² p(φ)`.
pub fn sequence_error(grid: &SourceGrid, estimate: f64) -> f64 {
    neumaier_sum(grid.phis.iter().zip(grid.weights()).map(|(p, w)| (estimate - p).powi(2) * w))
}

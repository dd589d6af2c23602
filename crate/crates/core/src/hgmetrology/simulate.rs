use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coherence::{shift_grid, ModelBank};
use super::grid::{bayes_update_row, mmse_estimate, sequence_error, SourceGrid};
use super::model::{HgConfig, MeasurementModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub n_sequences: usize,
    pub n_measurements: usize,
    /// Adaptive shifts are searched over `[-adaptive_bound, adaptive_bound]`.
    pub adaptive_bound: f64,
    pub adaptive_step: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { n_sequences: 480, n_measurements: 200, adaptive_bound: 3.0, adaptive_step: 0.1 }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sequences == 0 || self.n_measurements == 0 {
            return Err(Error::InvalidParameter("sequence and measurement counts must be positive".into()));
        }
        if !(self.adaptive_bound >= 0.0 && self.adaptive_bound <= 5.0) {
            return Err(Error::InvalidParameter(format!(
                "adaptive bound {} outside [0, 5]",
                self.adaptive_bound
            )));
        }
        if !(self.adaptive_step > 0.0) {
            return Err(Error::InvalidParameter("adaptive step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Constant(f64),
    /// Re-pick the least-coherent shift before every measurement.
    Adaptive,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Constant(t) => write!(f, "theta={t}"),
            Strategy::Adaptive => f.write_str("adaptive"),
        }
    }
}

/// Mean and variance of the posterior error over sequences, per measurement count.
#[derive(Debug, Clone, PartialEq)]
pub struct AmseCurve {
    pub strategy: Strategy,
    /// Index `k - 1` holds the value after `k` measurements.
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

impl AmseCurve {
    pub fn final_mean(&self) -> f64 {
        *self.mean.last().expect("non-empty curve")
    }

    pub fn at(&self, k: usize) -> f64 {
        self.mean[k - 1]
    }
}

enum Shifts<'a> {
    Fixed(&'a MeasurementModel),
    Greedy(&'a ModelBank),
}

/// Sum by recursive halving; the association order depends only on the length.
fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

fn run_sequence(
    prior: &SourceGrid,
    shifts: &Shifts<'_>,
    n_measurements: usize,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let truth = WeightedIndex::new(prior.weights())
        .map_err(|e| Error::InvalidParameter(format!("prior: {e}")))?
        .sample(&mut rng);
    let mut posterior = prior.clone();
    let mut errors = Vec::with_capacity(n_measurements);
    for _ in 0..n_measurements {
        let model = match shifts {
            Shifts::Fixed(m) => *m,
            Shifts::Greedy(bank) => &bank.models()[bank.best_index(posterior.weights())?],
        };
        let outcome = WeightedIndex::new(model.conditional(truth))
            .map_err(|e| Error::InvalidParameter(format!("outcome distribution: {e}")))?
            .sample(&mut rng);
        posterior = bayes_update_row(&posterior, &model.likelihood(outcome), outcome)?;
        errors.push(sequence_error(&posterior, mmse_estimate(&posterior)));
    }
    Ok(errors)
}

/// Monte-Carlo AMSE of one strategy.
///
/// Sequence `s` draws from ChaCha8 seeded by `seed` on stream `s`, so results
/// do not depend on thread scheduling and strategies sharing a seed see the
/// same true source positions.
pub fn simulate_amse(
    strategy: Strategy,
    sim: &SimulationConfig,
    prior: &SourceGrid,
    hg: &HgConfig,
    seed: u64,
) -> Result<AmseCurve> {
    sim.validate()?;
    let fixed;
    let bank;
    let shifts = match strategy {
        Strategy::Constant(theta) => {
            fixed = MeasurementModel::for_grid(prior, theta, hg)?;
            Shifts::Fixed(&fixed)
        }
        Strategy::Adaptive => {
            let thetas = shift_grid(-sim.adaptive_bound, sim.adaptive_bound, sim.adaptive_step)?;
            bank = ModelBank::new(prior.phis(), &thetas, hg)?;
            Shifts::Greedy(&bank)
        }
    };
    let runs = (0..sim.n_sequences as u64)
        .into_par_iter()
        .map(|s| run_sequence(prior, &shifts, sim.n_measurements, seed, s))
        .collect::<Result<Vec<_>>>()?;
    let n = runs.len() as f64;
    let mut mean = Vec::with_capacity(sim.n_measurements);
    let mut variance = Vec::with_capacity(sim.n_measurements);
    let mut column = vec![0.0; runs.len()];
    for k in 0..sim.n_measurements {
        for (c, r) in column.iter_mut().zip(&runs) {
            *c = r[k];
        }
        let m = pairwise_sum(&column) / n;
        let sq: Vec<f64> = column.iter().map(|e| (e - m) * (e - m)).collect();
        mean.push(m);
        variance.push(pairwise_sum(&sq) / n);
    }
    Ok(AmseCurve { strategy, mean, variance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgmetrology::grid::default_prior;

    fn small() -> SimulationConfig {
        SimulationConfig { n_sequences: 8, n_measurements: 5, ..SimulationConfig::default() }
    }

    #[test]
    fn reproducible_for_a_fixed_seed() {
        let prior = default_prior();
        let hg = HgConfig::default();
        let a = simulate_amse(Strategy::Constant(0.5), &small(), &prior, &hg, 7).unwrap();
        let b = simulate_amse(Strategy::Constant(0.5), &small(), &prior, &hg, 7).unwrap();
        assert_eq!(a, b);
        let c = simulate_amse(Strategy::Constant(0.5), &small(), &prior, &hg, 8).unwrap();
        assert_ne!(a.mean, c.mean);
        assert!(a.mean.iter().chain(&a.variance).all(|v| *v >= 0.0));
    }

    #[test]
    fn adaptive_runs_on_a_coarse_bank() {
        let sim = SimulationConfig { adaptive_step: 1.0, ..small() };
        let curve = simulate_amse(Strategy::Adaptive, &sim, &default_prior(), &HgConfig::default(), 1).unwrap();
        assert_eq!(curve.mean.len(), 5);
    }

    #[test]
    fn pairwise_sum_matches_plain_sum_on_integers() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = SimulationConfig { n_sequences: 0, ..small() };
        assert!(simulate_amse(Strategy::Adaptive, &bad, &default_prior(), &HgConfig::default(), 1).is_err());
    }
}

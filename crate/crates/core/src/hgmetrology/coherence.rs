use rayon::prelude::*;

use super::grid::SourceGrid;
use super::model::{HgConfig, MeasurementModel};
use crate::error::{Error, Result};

/// Values closer than this are treated as tied when choosing a shift.
pub const TIE_TOL: f64 = 1e-12;

/// `lo, lo + step, ..., hi` built from integer multiples so that `0` and
/// mirrored points are represented exactly.
pub fn shift_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter(format!("bad shift grid [{lo}, {hi}] step {step}")));
    }
    let first = (lo / step).round() as i64;
    let last = (hi / step).round() as i64;
    Ok((first..=last).map(|k| k as f64 * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub theta: f64,
    pub coherence: f64,
    pub holevo: f64,
}

/// Ensemble coherence as a function of the mode shift.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceCurve {
    pub points: Vec<CurvePoint>,
}

impl CoherenceCurve {
    /// Interior points strictly below both neighbours.
    pub fn local_minima(&self) -> Vec<CurvePoint> {
        self.points
            .windows(3)
            .filter(|w| w[1].coherence < w[0].coherence && w[1].coherence < w[2].coherence)
            .map(|w| w[1])
            .collect()
    }

    pub fn global_min(&self) -> Option<CurvePoint> {
        self.points.iter().copied().min_by(|a, b| a.coherence.total_cmp(&b.coherence))
    }

    /// `max |C(θ) - C(-θ)|` over points whose mirror is also on the curve.
    pub fn asymmetry(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .filter(|&i| (self.points[i].theta + self.points[n - 1 - i].theta).abs() < 1e-9)
            .map(|i| (self.points[i].coherence - self.points[n - 1 - i].coherence).abs())
            .fold(0.0, f64::max)
    }

    pub fn value_at(&self, theta: f64) -> Option<f64> {
        self.points.iter().find(|p| (p.theta - theta).abs() < 1e-9).map(|p| p.coherence)
    }
}

/// Coherence of `grid` measured at each shift in `thetas`.
pub fn coherence_vs_shift(grid: &SourceGrid, thetas: &[f64], cfg: &HgConfig) -> Result<CoherenceCurve> {
    let points = thetas
        .par_iter()
        .map(|&theta| {
            let split = MeasurementModel::for_grid(grid, theta, cfg)?.information(grid.weights())?;
            Ok(CurvePoint { theta, coherence: split.coherence, holevo: split.holevo })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceCurve { points })
}

/// The two smallest positive local minima of a curve, in increasing `θ`.
pub fn positive_optima(curve: &CoherenceCurve) -> Result<(f64, f64)> {
    let mins: Vec<f64> = curve.local_minima().into_iter().map(|p| p.theta).filter(|&t| t > 0.0).collect();
    match mins.as_slice() {
        [a, b, ..] => Ok((*a, *b)),
        _ => Err(Error::DegenerateInput(format!(
            "expected two positive local minima of the coherence curve, found {}",
            mins.len()
        ))),
    }
}

/// Precomputed models for a fixed set of shifts.
#[derive(Debug, Clone)]
pub struct ModelBank {
    models: Vec<MeasurementModel>,
}

impl ModelBank {
    pub fn new(phis: &[f64], thetas: &[f64], cfg: &HgConfig) -> Result<Self> {
        let models = thetas
            .par_iter()
            .map(|&t| MeasurementModel::new(phis, t, cfg))
            .collect::<Result<Vec<_>>>()?;
        if models.is_empty() {
            return Err(Error::InvalidParameter("model bank needs at least one shift".into()));
        }
        Ok(Self { models })
    }

    pub fn models(&self) -> &[MeasurementModel] {
        &self.models
    }

    /// Index of the minimum-coherence shift for weights `w`.
    pub fn best_index(&self, w: &[f64]) -> Result<usize> {
        let values = self.models.iter().map(|m| m.coherence(w)).collect::<Result<Vec<_>>>()?;
        let thetas: Vec<f64> = self.models.iter().map(MeasurementModel::theta).collect();
        Ok(tie_broken_argmin(&thetas, &values))
    }
}

/// Minimum of `values`; near-ties go to the smallest `|θ|`, then to negative `θ`.
pub fn tie_broken_argmin(thetas: &[f64], values: &[f64]) -> usize {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (0..values.len())
        .filter(|&i| values[i] <= min + TIE_TOL)
        .min_by(|&a, &b| {
            thetas[a].abs().total_cmp(&thetas[b].abs()).then(thetas[a].total_cmp(&thetas[b]))
        })
        .expect("non-empty")
}

/// Greedy choice: the shift in the bank with least coherence for `grid`.
pub fn choose_adaptive_shift(grid: &SourceGrid, bank: &ModelBank) -> Result<f64> {
    Ok(bank.models[bank.best_index(grid.weights())?].theta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgmetrology::grid::{default_prior, symmetric_points};

    #[test]
    fn shift_grid_is_exact() {
        let g = shift_grid(-3.0, 3.0, 0.1).unwrap();
        assert_eq!(g.len(), 61);
        assert_eq!(g[30], 0.0);
        for i in 0..61 {
            assert_eq!(g[i], -g[60 - i]);
        }
    }

    #[test]
    fn ties_prefer_small_then_negative_shifts() {
        let t = [-1.0, -0.5, 0.5, 1.0];
        assert_eq!(tie_broken_argmin(&t, &[0.1, 0.2, 0.2, 0.1]), 0);
        assert_eq!(tie_broken_argmin(&t, &[0.1, 0.1, 0.1, 0.1]), 1);
        assert_eq!(tie_broken_argmin(&t, &[0.3, 0.2, 0.1, 0.3]), 2);
    }

    #[test]
    fn delta_prior_has_zero_coherence_everywhere() {
        let g = crate::hgmetrology::grid::SourceGrid::delta(symmetric_points(50, 2.0), 20).unwrap();
        let thetas = shift_grid(-1.0, 1.0, 0.5).unwrap();
        let bank = ModelBank::new(g.phis(), &thetas, &HgConfig::default()).unwrap();
        for m in bank.models() {
            assert!(m.coherence(g.weights()).unwrap().abs() < 1e-12);
        }
        assert_eq!(choose_adaptive_shift(&g, &bank).unwrap(), 0.0);
    }

    #[test]
    fn prior_curve_is_symmetric_and_below_holevo() {
        let thetas = shift_grid(-2.0, 2.0, 0.25).unwrap();
        let curve = coherence_vs_shift(&default_prior(), &thetas, &HgConfig::default()).unwrap();
        assert!(curve.asymmetry() < 1e-8);
        for p in &curve.points {
            assert!(p.coherence <= p.holevo + 1e-9 && p.coherence >= -1e-9);
        }
    }
}

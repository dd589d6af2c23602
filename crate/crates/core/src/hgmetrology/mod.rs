//! Bayesian localization of a Gaussian point source by photon counting in
//! displaced Hermite-Gauss modes.
//!
//! A photon from a source at `φ` is measured in the modes `h_q(x - θ)`. The
//! outcome statistics `p(q|φ)` over a discretized prior define a pure-state
//! ensemble, and its coherence in the mode basis ranks shifts `θ` by how much
//! of the Holevo information a single measurement leaves unread. Sequences of
//! measurements update the prior by Bayes' rule, either at a fixed shift or
//! greedily re-choosing the least-coherent shift every time.

mod coherence;
mod grid;
mod model;
mod modes;
mod simulate;

pub use coherence::{
    choose_adaptive_shift, coherence_vs_shift, positive_optima, shift_grid, tie_broken_argmin,
    CoherenceCurve, CurvePoint, ModelBank, TIE_TOL,
};
pub use grid::{
    bayes_update_row, default_prior, mmse_estimate, sequence_error, symmetric_points, PriorConfig,
    SourceGrid,
};
pub use model::{
    hg_ensemble, measurement_model, overlap_coefficients, HgConfig, InformationSplit,
    MeasurementModel, MAX_OVERFLOW, QUADRATURE_TOL,
};
pub use modes::{
    hg_mode, hg_modes, mode_gram_matrix, photon_wavefunction, Quadrature, MAX_MODE_INDEX,
};
pub use simulate::{simulate_amse, AmseCurve, SimulationConfig, Strategy};

use crate::error::Result;

/// Posterior after observing outcome `m` under `model`.
pub fn bayes_update(grid: &SourceGrid, model: &MeasurementModel, m: usize) -> Result<SourceGrid> {
    if m >= model.n_outcomes() {
        return Err(crate::Error::OutcomeOutOfRange { outcome: m, count: model.n_outcomes() });
    }
    bayes_update_row(grid, &model.likelihood(m), m)
}

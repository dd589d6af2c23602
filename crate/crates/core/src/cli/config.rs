use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CliError, ExitKind};
use crate::hgmetrology::{HgConfig, PriorConfig, SimulationConfig};
use crate::qmath::LogBase;

/// Everything a run can be configured with. Every section has defaults, so
/// `{}` is a valid document; unknown keys are rejected at every level.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Master seed. Required by the stochastic subcommands.
    pub seed: Option<u64>,
    pub log_base: LogBase,
    pub cxi_verify: CxiVerifyConfig,
    pub bloch: BlochConfig,
    pub hg: HgConfig,
    pub prior: PriorConfig,
    pub curve: CurveConfig,
    pub simulation: SimulationConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CxiVerifyConfig {
    pub trials: usize,
    /// Largest Hilbert-space dimension for projective trials (at least 2).
    pub max_dim: usize,
    pub max_states: usize,
    pub max_povm_outcomes: usize,
    pub povm_family: PovmFamily,
    /// Inject one incomplete POVM so the invariant check must trip.
    pub self_test: bool,
}

/// Random POVM generator used by the verification trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PovmFamily {
    /// Full-rank Ginibre `A_j`.
    #[default]
    General,
    /// Rank-one `A_j`; outcome counts are raised to at least the dimension.
    RankOne,
}

impl Default for CxiVerifyConfig {
    fn default() -> Self {
        Self { trials: 100, max_dim: 4, max_states: 5, max_povm_outcomes: 4, povm_family: PovmFamily::General, self_test: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlochConfig {
    /// Separations that get a full landscape.
    pub thetas: Vec<f64>,
    /// `[n_polar, n_azimuth]`.
    pub grid: [usize; 2],
    /// Rows of the comparison report at `π k / report_points`, `k = 1..=report_points`.
    pub report_points: usize,
}

impl Default for BlochConfig {
    fn default() -> Self {
        Self { thetas: vec![PI / 10.0, FRAC_PI_2, PI], grid: [181, 91], report_points: 50 }
    }
}

/// Shift grid for coherence curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurveConfig {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    /// Outcome observed at the first optimum to form the updated distribution.
    pub post_outcome: usize,
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self { min: -5.0, max: 5.0, step: 0.05, post_outcome: 2 }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::new(ExitKind::Config, format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::new(ExitKind::Io, format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn require_seed(&self, command: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::new(ExitKind::Config, format!("{command} is stochastic and needs a seed (config \"seed\" or --seed)"))
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let config = |m: String| CliError::new(ExitKind::Config, m);
        if self.cxi_verify.max_dim < 2 || self.cxi_verify.max_states < 2 || self.cxi_verify.max_povm_outcomes < 2 {
            return Err(config("cxi_verify: max_dim, max_states and max_povm_outcomes must be at least 2".into()));
        }
        if self.bloch.thetas.is_empty() {
            return Err(config("bloch.thetas must not be empty".into()));
        }
        if self.bloch.thetas.iter().any(|t| !(*t > 0.0 && *t <= PI)) {
            return Err(config("bloch.thetas must lie in (0, π]".into()));
        }
        if self.bloch.grid[0] < 2 || self.bloch.grid[1] < 2 || self.bloch.report_points == 0 {
            return Err(config("bloch.grid needs at least 2x2 points and report_points at least 1".into()));
        }
        if !(self.curve.step > 0.0 && self.curve.min < self.curve.max) {
            return Err(config("curve needs min < max and a positive step".into()));
        }
        self.hg.validate().map_err(|e| config(format!("hg: {e}")))?;
        self.prior.validate().map_err(|e| config(format!("prior: {e}")))?;
        self.simulation.validate().map_err(|e| config(format!("simulation: {e}")))?;
        Ok(())
    }
}

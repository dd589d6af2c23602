use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{PovmFamily, RunConfig};
use super::output::{write_json, Cell, CsvTable};
use super::{CliError, ExitKind};
use crate::discrimination::{
    coherence_landscape, coherence_vs_theta_report, helstrom_angle,
    helstrom_direction, landscape_argmin, numeric_min_angle, theta_grid, DiscriminationProblem,
};
use crate::error::Error;
use crate::hgmetrology::{
    bayes_update, coherence_vs_shift, measurement_model, positive_optima, shift_grid,
    simulate_amse, CoherenceCurve, SourceGrid, Strategy,
};
use crate::infotheory::{cxi_residual, Ensemble};
use crate::povm::{
    naimark_dilate, post_measurement_holevo, povm_cxi_residual, povm_probabilities, Povm,
};
use crate::qmath::{random, ComplexSquareMatrix, LogBase};

/// Invariant threshold for every residual checked by the harness.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// What a subcommand wrote and a one-line digest for the terminal.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub message: String,
}

fn computation(e: Error) -> CliError {
    CliError::new(ExitKind::Computation, e.to_string())
}

fn unit_column(name: &str, base: LogBase) -> String {
    format!("{name}_{}", base.unit())
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub stream: u64,
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub log_base: LogBase,
    pub trials: usize,
    pub tolerance_nats: f64,
    pub projective_max_residual: f64,
    pub povm_family: PovmFamily,
    pub povm_max_residual: f64,
    /// `C − (χ − I − Σ_j p_j χ_j)`: the residual once the information left in
    /// the post-measurement states is accounted for.
    pub povm_max_corrected_residual: f64,
    pub max_isometry_defect: f64,
    pub max_statistics_defect: f64,
    pub max_completeness_defect: f64,
    pub failures: Vec<TrialFailure>,
    pub passed: bool,
}

struct TrialOutcome {
    projective: f64,
    povm: f64,
    corrected: f64,
    isometry: f64,
    statistics: f64,
    completeness: f64,
}

fn random_ensemble(rng: &mut ChaCha8Rng, dim: usize, max_states: usize) -> crate::Result<Ensemble> {
    let n = rng.random_range(2..=max_states);
    let prior = random::random_distribution(rng, n);
    let states = (0..n)
        .map(|_| {
            let rank = rng.random_range(1..=dim);
            random::random_density_matrix(rng, dim, rank)
        })
        .collect();
    Ensemble::from_parts(&prior, states)
}

fn run_trial(cfg: &RunConfig, rng: &mut ChaCha8Rng, corrupt: bool) -> crate::Result<TrialOutcome> {
    let v = &cfg.cxi_verify;
    let dim = rng.random_range(2..=v.max_dim);
    let e = random_ensemble(rng, dim, v.max_states)?;
    let basis = random::random_basis(rng, dim);
    let projective = cxi_residual(&e, &basis)?.abs();

    let pdim = rng.random_range(2..=v.max_dim.min(3));
    let e = random_ensemble(rng, pdim, v.max_states)?;
    let mut povm = match v.povm_family {
        PovmFamily::General => {
            let outcomes = rng.random_range(2..=v.max_povm_outcomes);
            Povm::random(rng, pdim, outcomes)?
        }
        PovmFamily::RankOne => {
            let outcomes = rng.random_range(pdim..=v.max_povm_outcomes.max(pdim));
            Povm::random_rank_one(rng, pdim, outcomes)?
        }
    };
    if corrupt {
        let scaled = povm
            .kraus()
            .iter()
            .map(|k| ComplexSquareMatrix::new(k * crate::qmath::C64::new(1.1, 0.0)))
            .collect::<crate::Result<Vec<_>>>()?;
        povm = Povm::from_kraus_unchecked(scaled)?;
    }
    let completeness = povm.completeness_defect();
    if completeness > RESIDUAL_TOL {
        return Ok(TrialOutcome { projective, povm: 0.0, corrected: 0.0, isometry: 0.0, statistics: 0.0, completeness });
    }
    let dilation = naimark_dilate(&povm);
    let mut statistics: f64 = 0.0;
    for entry in e.entries() {
        let direct = povm_probabilities(&entry.state, &povm)?;
        let dilated = dilation.dilated_probabilities(&dilation.dilate_state(&entry.state)?);
        for (a, b) in direct.weights().iter().zip(&dilated) {
            statistics = statistics.max((a - b).abs());
        }
    }
    let residual = povm_cxi_residual(&e, &povm)?;
    Ok(TrialOutcome {
        projective,
        povm: residual.abs(),
        corrected: (residual + post_measurement_holevo(&e, &povm)?).abs(),
        isometry: dilation.isometry_defect(),
        statistics,
        completeness,
    })
}

/// Randomized check of the coherence/information identity for projective
/// measurements and POVMs. Trial `t` uses ChaCha8 seeded by the master seed
/// on stream `t`.
pub fn run_cxi_verify(cfg: &RunConfig, out: &Path) -> Result<(RunSummary, VerifyReport), CliError> {
    let seed = cfg.require_seed("cxi-verify")?;
    let v = cfg.cxi_verify;
    let base = cfg.log_base;
    let mut report = VerifyReport {
        log_base: base,
        trials: v.trials,
        tolerance_nats: RESIDUAL_TOL,
        projective_max_residual: 0.0,
        povm_family: v.povm_family,
        povm_max_residual: 0.0,
        povm_max_corrected_residual: 0.0,
        max_isometry_defect: 0.0,
        max_statistics_defect: 0.0,
        max_completeness_defect: 0.0,
        failures: Vec::new(),
        passed: true,
    };
    let total = if v.self_test { v.trials.max(1) } else { v.trials };
    for t in 0..total {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        match run_trial(cfg, &mut rng, v.self_test && t == 0) {
            Ok(o) => {
                report.projective_max_residual = report.projective_max_residual.max(o.projective);
                report.povm_max_residual = report.povm_max_residual.max(o.povm);
                report.povm_max_corrected_residual = report.povm_max_corrected_residual.max(o.corrected);
                report.max_isometry_defect = report.max_isometry_defect.max(o.isometry);
                report.max_statistics_defect = report.max_statistics_defect.max(o.statistics);
                report.max_completeness_defect = report.max_completeness_defect.max(o.completeness);
            }
            Err(e) => report.failures.push(TrialFailure {
                trial: t,
                seed,
                stream: t as u64,
                kind: if matches!(e, Error::EigenNonConvergence { .. }) { "eigensolver" } else { "computation" },
                message: e.to_string(),
            }),
        }
    }
    let worst = [
        report.projective_max_residual,
        report.povm_max_residual,
        report.max_isometry_defect,
        report.max_statistics_defect,
        report.max_completeness_defect,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let invariant_ok = worst < RESIDUAL_TOL;
    report.passed = invariant_ok && report.failures.is_empty();
    report.projective_max_residual = base.from_nats(report.projective_max_residual);
    report.povm_max_residual = base.from_nats(report.povm_max_residual);
    report.povm_max_corrected_residual = base.from_nats(report.povm_max_corrected_residual);

    let path = write_json(out.join("cxi_verify.json"), &report)?;
    let message = format!(
        "{} trials: projective {:.3e}, povm {:.3e} {} max residual; {} failures",
        total,
        report.projective_max_residual,
        report.povm_max_residual,
        base.unit(),
        report.failures.len()
    );
    if !invariant_ok {
        return Err(CliError::new(
            ExitKind::Invariant,
            format!("invariant violated (worst defect {worst:.3e} nats); report at {}", path.display()),
        ));
    }
    if !report.failures.is_empty() {
        return Err(CliError::new(
            ExitKind::Computation,
            format!("{} trials failed to compute; report at {}", report.failures.len(), path.display()),
        ));
    }
    Ok((RunSummary { files: vec![path], message }, report))
}

#[derive(Debug, Clone, Serialize)]
pub struct LandscapeSummary {
    pub theta: f64,
    pub chi: f64,
    pub argmin_polar: f64,
    pub argmin_azimuth: f64,
    pub argmin_normalized: f64,
    /// Axis angle between the grid argmin and the minimum-error direction, radians.
    pub argmin_deviation: f64,
    pub helstrom_angle: f64,
    pub numeric_min_angle: f64,
    pub file: String,
}

/// Landscapes for each configured separation plus the projective/USD report.
pub fn run_bloch(cfg: &RunConfig, out: &Path) -> Result<(RunSummary, Vec<LandscapeSummary>), CliError> {
    let base = cfg.log_base;
    let grid = (cfg.bloch.grid[0], cfg.bloch.grid[1]);
    let mut files = Vec::new();
    let mut summaries = Vec::new();
    for &theta in &cfg.bloch.thetas {
        let problem = DiscriminationProblem::new(theta).map_err(computation)?;
        let samples = coherence_landscape(&problem, grid).map_err(computation)?;
        let name = format!("landscape_theta_{theta:.6}.csv");
        let coherence = unit_column("coherence", base);
        let mut table = CsvTable::create(out.join(&name), &["polar", "azimuth", &coherence, "normalized"])?;
        for s in &samples {
            table.row(&[
                Cell::Float(s.direction.polar()),
                Cell::Float(s.direction.azimuth()),
                Cell::Float(base.from_nats(s.coherence)),
                Cell::Float(s.normalized),
            ])?;
        }
        files.push(table.finish()?);
        let best = landscape_argmin(&samples).expect("non-empty landscape");
        summaries.push(LandscapeSummary {
            theta,
            chi: base.from_nats(problem.holevo().map_err(computation)?),
            argmin_polar: best.direction.polar(),
            argmin_azimuth: best.direction.azimuth(),
            argmin_normalized: best.normalized,
            argmin_deviation: best.direction.axis_angle(&helstrom_direction(theta)),
            helstrom_angle: helstrom_angle(theta),
            numeric_min_angle: numeric_min_angle(&problem).map_err(computation)?,
            file: name,
        });
    }

    let rows = coherence_vs_theta_report(&theta_grid(cfg.bloch.report_points)).map_err(computation)?;
    let chi = unit_column("chi", base);
    let mut table = CsvTable::create(
        out.join("bloch_report.csv"),
        &["theta", &chi, "projective_normalized", "usd_normalized", "projective_error", "usd_error"],
    )?;
    let mut worst: f64 = 0.0;
    for r in &rows {
        worst = worst.max(r.projective_residual.abs()).max(r.usd_residual.abs());
        table.row(&[
            Cell::Float(r.theta),
            Cell::Float(base.from_nats(r.chi)),
            Cell::Float(r.projective_normalized),
            Cell::Float(r.usd_normalized),
            Cell::Float(r.projective_error),
            Cell::Float(r.usd_error),
        ])?;
    }
    files.push(table.finish()?);
    files.push(write_json(out.join("bloch_summary.json"), &summaries)?);
    if worst >= RESIDUAL_TOL {
        return Err(CliError::new(ExitKind::Invariant, format!("report CXI residual {worst:.3e}")));
    }
    let chis: Vec<String> = summaries.iter().map(|s| format!("{:.4}", s.chi)).collect();
    let message = format!("{} landscapes, {} report rows; chi = [{}] {}", summaries.len(), rows.len(), chis.join(", "), base.unit());
    Ok((RunSummary { files, message }, summaries))
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveExtremum {
    pub theta: f64,
    pub coherence: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HgCoherenceReport {
    pub log_base: LogBase,
    pub coherence_at_zero: f64,
    pub chi: f64,
    pub prior_local_minima: Vec<CurveExtremum>,
    pub theta_opt1: f64,
    pub theta_opt2: f64,
    pub post_outcome: usize,
    pub post_global_min: CurveExtremum,
    pub post_local_minima: Vec<CurveExtremum>,
}

fn write_grid(path: PathBuf, grid: &SourceGrid) -> Result<PathBuf, CliError> {
    let mut t = CsvTable::create(path, &["phi", "weight"])?;
    for (p, w) in grid.phis().iter().zip(grid.weights()) {
        t.row(&[Cell::Float(*p), Cell::Float(*w)])?;
    }
    t.finish()
}

fn write_curve(path: PathBuf, curve: &CoherenceCurve, base: LogBase) -> Result<PathBuf, CliError> {
    let (c, chi) = (unit_column("coherence", base), unit_column("chi", base));
    let mut t = CsvTable::create(path, &["theta", &c, &chi])?;
    for p in &curve.points {
        t.row(&[Cell::Float(p.theta), Cell::Float(base.from_nats(p.coherence)), Cell::Float(base.from_nats(p.holevo))])?;
    }
    t.finish()
}

fn extrema(curve: &CoherenceCurve, base: LogBase) -> Vec<CurveExtremum> {
    curve
        .local_minima()
        .into_iter()
        .map(|p| CurveExtremum { theta: p.theta, coherence: base.from_nats(p.coherence) })
        .collect()
}

fn prior_curve(cfg: &RunConfig) -> Result<(SourceGrid, CoherenceCurve), CliError> {
    let prior = SourceGrid::two_peak(&cfg.prior).map_err(computation)?;
    let thetas = shift_grid(cfg.curve.min, cfg.curve.max, cfg.curve.step).map_err(computation)?;
    let curve = coherence_vs_shift(&prior, &thetas, &cfg.hg).map_err(computation)?;
    Ok((prior, curve))
}

/// Prior and updated distributions with their coherence-vs-shift curves.
pub fn run_hg_coherence(cfg: &RunConfig, out: &Path) -> Result<(RunSummary, HgCoherenceReport), CliError> {
    let base = cfg.log_base;
    let (prior, curve) = prior_curve(cfg)?;
    let (opt1, opt2) = positive_optima(&curve).map_err(computation)?;
    let model = measurement_model(&prior, opt1, &cfg.hg).map_err(computation)?;
    let post = bayes_update(&prior, &model, cfg.curve.post_outcome).map_err(computation)?;
    let thetas: Vec<f64> = curve.points.iter().map(|p| p.theta).collect();
    let post_curve = coherence_vs_shift(&post, &thetas, &cfg.hg).map_err(computation)?;

    let files = vec![
        write_grid(out.join("prior.csv"), &prior)?,
        write_grid(out.join("post.csv"), &post)?,
        write_curve(out.join("coherence_prior.csv"), &curve, base)?,
        write_curve(out.join("coherence_post.csv"), &post_curve, base)?,
    ];
    let zero = curve
        .points
        .iter()
        .min_by(|a, b| a.theta.abs().total_cmp(&b.theta.abs()))
        .expect("non-empty curve");
    let best = post_curve.global_min().expect("non-empty curve");
    let report = HgCoherenceReport {
        log_base: base,
        coherence_at_zero: base.from_nats(zero.coherence),
        chi: base.from_nats(zero.holevo),
        prior_local_minima: extrema(&curve, base),
        theta_opt1: opt1,
        theta_opt2: opt2,
        post_outcome: cfg.curve.post_outcome,
        post_global_min: CurveExtremum { theta: best.theta, coherence: base.from_nats(best.coherence) },
        post_local_minima: extrema(&post_curve, base),
    };
    let mut files = files;
    files.push(write_json(out.join("hg_coherence.json"), &report)?);
    let message = format!(
        "C(0) = {:.4}, chi = {:.4} {}; optima at ±{opt1}, ±{opt2}",
        report.coherence_at_zero,
        report.chi,
        base.unit()
    );
    Ok((RunSummary { files, message }, report))
}

#[derive(Debug, Clone, Serialize)]
pub struct HgSimulateReport {
    pub seed: u64,
    pub n_sequences: usize,
    pub n_measurements: usize,
    pub n_modes: usize,
    pub theta_opt1: f64,
    pub theta_opt2: f64,
    pub strategies: Vec<String>,
    pub final_amse: Vec<f64>,
}

/// AMSE curves for θ = 0, 0.5, the two positive prior optima, and the adaptive rule.
pub fn run_hg_simulate(cfg: &RunConfig, out: &Path) -> Result<(RunSummary, HgSimulateReport), CliError> {
    let seed = cfg.require_seed("hg-simulate")?;
    let (prior, curve) = prior_curve(cfg)?;
    let (opt1, opt2) = positive_optima(&curve).map_err(computation)?;
    let strategies = [
        Strategy::Constant(0.0),
        Strategy::Constant(0.5),
        Strategy::Constant(opt1),
        Strategy::Constant(opt2),
        Strategy::Adaptive,
    ];
    let mut table = CsvTable::create(out.join("amse.csv"), &["k", "strategy", "amse", "variance"])?;
    let mut finals = Vec::new();
    for s in strategies {
        let amse = simulate_amse(s, &cfg.simulation, &prior, &cfg.hg, seed).map_err(computation)?;
        let label = s.to_string();
        for (k, (m, v)) in amse.mean.iter().zip(&amse.variance).enumerate() {
            table.row(&[Cell::Int(k + 1), Cell::Text(&label), Cell::Float(*m), Cell::Float(*v)])?;
        }
        finals.push(amse.final_mean());
    }
    let mut files = vec![table.finish()?];
    let report = HgSimulateReport {
        seed,
        n_sequences: cfg.simulation.n_sequences,
        n_measurements: cfg.simulation.n_measurements,
        n_modes: cfg.hg.n_modes,
        theta_opt1: opt1,
        theta_opt2: opt2,
        strategies: strategies.iter().map(Strategy::to_string).collect(),
        final_amse: finals.clone(),
    };
    files.push(write_json(out.join("hg_simulate.json"), &report)?);
    let finals: Vec<String> = finals.iter().map(|f| format!("{f:.4}")).collect();
    let message = format!("final AMSE [{}] for {:?}", finals.join(", "), report.strategies);
    Ok((RunSummary { files, message }, report))
}

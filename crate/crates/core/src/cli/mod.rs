//! Command-line front end: config loading, overrides, and the four
//! subcommands. The `cxi` binary is a thin wrapper over [`run_from_args`].

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::qmath::LogBase;

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{
    run_bloch, run_cxi_verify, run_hg_coherence, run_hg_simulate, RunSummary, RESIDUAL_TOL,
};
pub use config::{BlochConfig, CurveConfig, CxiVerifyConfig, PovmFamily, RunConfig};
pub use output::{format_float, CsvTable};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Config = 2,
    Io = 3,
    Invariant = 4,
    Computation = 5,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::new(ExitKind::Computation, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "cxi", version, about = "Coherence and information of quantum measurements")]
pub struct Cli {
    /// JSON config; every key is optional, unknown keys are rejected.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub log_base: Option<LogBase>,
    /// Number of HG modes before the overflow outcome.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    #[arg(long, global = true)]
    pub sequences: Option<usize>,
    #[arg(long, global = true)]
    pub measurements: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized check of C = χ − I for projective measurements and POVMs.
    CxiVerify {
        #[arg(long)]
        trials: Option<usize>,
        /// Inject an incomplete POVM; the run must exit with code 4.
        #[arg(long)]
        self_test: bool,
    },
    /// Coherence landscapes for two-state discrimination on the Bloch sphere.
    Bloch,
    /// Coherence vs displacement for the Hermite-Gauss mode measurement.
    HgCoherence,
    /// AMSE of constant and adaptive displacement strategies.
    HgSimulate,
}

impl Cli {
    /// Loads the config file (if any) and applies flag overrides.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if let Some(b) = self.log_base {
            cfg.log_base = b;
        }
        if let Some(n) = self.modes {
            cfg.hg.n_modes = n;
        }
        if let Some(n) = self.sequences {
            cfg.simulation.n_sequences = n;
        }
        if let Some(n) = self.measurements {
            cfg.simulation.n_measurements = n;
        }
        if let Command::CxiVerify { trials, self_test } = &self.command {
            if let Some(t) = trials {
                cfg.cxi_verify.trials = *t;
            }
            cfg.cxi_verify.self_test |= *self_test;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn run(&self) -> Result<RunSummary, CliError> {
        let cfg = self.resolve()?;
        std::fs::create_dir_all(&self.out).map_err(|e| output::io_error(&self.out, e))?;
        let out = self.out.as_path();
        Ok(match self.command {
            Command::CxiVerify { .. } => run_cxi_verify(&cfg, out)?.0,
            Command::Bloch => run_bloch(&cfg, out)?.0,
            Command::HgCoherence => run_hg_coherence(&cfg, out)?.0,
            Command::HgSimulate => run_hg_simulate(&cfg, out)?.0,
        })
    }
}

/// Parses `args`, runs the subcommand, reports to stdout/stderr and returns
/// the exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitKind::Config.code() } else { 0 };
        }
    };
    match cli.run() {
        Ok(summary) => {
            println!("{}", summary.message);
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.kind.code()
        }
    }
}

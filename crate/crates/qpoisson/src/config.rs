//! Command-line flags, config files and the resolved [`RunConfig`].
//!
//! Values are taken from flags first, then from the `--config` JSON file,
//! then from defaults. The resolved configuration is echoed in every report.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpoisson_core::blocks::default_register_size;
use qpoisson_core::oracle::eigen_nd;
use qpoisson_core::problem::interior_len;
use qpoisson_core::{PoissonProblem, DEFAULT_QUBIT_CAP};
use serde::{Deserialize, Serialize};

use crate::AppError;

pub const CAP_ENV: &str = "QPOISSON_QUBIT_CAP";
pub const DEFAULT_PEA_SHOTS: usize = 2000;

#[derive(Debug, Parser)]
#[command(
    name = "qpoisson",
    version,
    about = "Statevector simulation of a quantum Poisson solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the solver and compare against the classical solution.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Sample the ancilla and register C this many times.
        #[arg(long)]
        shots: Option<usize>,
        /// Replace the reciprocal circuits by exact 1/k scaling.
        #[arg(long)]
        ideal_inversion: bool,
    },
    /// Histogram of the eigenvalue register after phase estimation.
    PeaHist {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        shots: Option<usize>,
    },
    /// Success probability as a function of α.
    AlphaSweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated α values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alphas: Option<Vec<f64>>,
    },
    /// Qubit and gate counts.
    Resources {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Grid intervals per axis (power of two).
    #[arg(long = "M", value_name = "M")]
    pub grid: Option<usize>,
    /// Spatial dimension.
    #[arg(long = "d", value_name = "D")]
    pub dim: Option<usize>,
    /// `e1`, a comma-separated list, or a file of numbers.
    #[arg(long, value_name = "RHS")]
    pub rhs: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Eigenvalue register size.
    #[arg(long = "n", value_name = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub resolution_shift: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest statevector allowed, in qubits.
    #[arg(long, env = CAP_ENV)]
    pub qubit_cap: Option<usize>,
    /// JSON file with default values for any of the above.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write the CSV projection here.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    PeaHist,
    AlphaSweep,
    Resources,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Solve => "solve",
            Mode::PeaHist => "pea-hist",
            Mode::AlphaSweep => "alpha-sweep",
            Mode::Resources => "resources",
        }
    }
}

/// Right-hand side as written in a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RhsSpec {
    Values(Vec<f64>),
    Text(String),
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(alias = "M")]
    pub grid: Option<usize>,
    #[serde(alias = "d")]
    pub dim: Option<usize>,
    pub rhs: Option<RhsSpec>,
    pub alpha: Option<f64>,
    pub n: Option<usize>,
    pub resolution_shift: Option<usize>,
    pub shots: Option<usize>,
    pub seed: Option<u64>,
    pub alphas: Option<Vec<f64>>,
    pub ideal_inversion: Option<bool>,
    pub qubit_cap: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| AppError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub grid: usize,
    pub dim: usize,
    pub rhs: Vec<f64>,
    pub alpha: f64,
    /// Register size in use (defaulted or overridden), before the shift.
    pub n: usize,
    pub n_override: Option<usize>,
    pub resolution_shift: usize,
    pub shots: usize,
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub ideal_inversion: bool,
    pub qubit_cap: usize,
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, AppError> {
        let (mode, common, shots, ideal, alphas) = match cli.command {
            Command::Solve {
                common,
                shots,
                ideal_inversion,
            } => (Mode::Solve, common, shots, ideal_inversion, None),
            Command::PeaHist { common, shots } => (Mode::PeaHist, common, shots, false, None),
            Command::AlphaSweep { common, alphas } => (Mode::AlphaSweep, common, None, false, alphas),
            Command::Resources { common } => (Mode::Resources, common, None, false, None),
        };
        let file = match &common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Self::resolve(mode, &common, shots, ideal, alphas, file)
    }

    pub fn resolve(
        mode: Mode,
        common: &CommonArgs,
        shots: Option<usize>,
        ideal_inversion: bool,
        alphas: Option<Vec<f64>>,
        file: FileConfig,
    ) -> Result<Self, AppError> {
        let grid = common
            .grid
            .or(file.grid)
            .ok_or_else(|| AppError::Config("--M is required".into()))?;
        let dim = common
            .dim
            .or(file.dim)
            .ok_or_else(|| AppError::Config("--d is required".into()))?;
        let len = interior_len(grid, dim).map_err(AppError::from)?;
        let rhs = match (&common.rhs, file.rhs) {
            (Some(text), _) => parse_rhs(text, len)?,
            (None, Some(RhsSpec::Values(v))) => v,
            (None, Some(RhsSpec::Text(text))) => parse_rhs(&text, len)?,
            (None, None) => preset_e1(len),
        };
        if rhs.len() != len {
            return Err(AppError::Config(format!(
                "rhs has {} entries, (M-1)^d = {len} expected",
                rhs.len()
            )));
        }
        let alpha = match common.alpha.or(file.alpha) {
            Some(a) => a,
            None => eigen_nd(grid, dim).map_err(AppError::from)?.lambda_min() / 2.0,
        };
        let n_override = common.n.or(file.n);
        let n = n_override.unwrap_or_else(|| default_register_size(grid, dim));
        let default_shots = if mode == Mode::PeaHist {
            DEFAULT_PEA_SHOTS
        } else {
            0
        };
        let alphas = alphas.or(file.alphas).unwrap_or_default();
        if mode == Mode::AlphaSweep && alphas.is_empty() {
            return Err(AppError::Config(
                "alpha-sweep needs a non-empty --alphas list".into(),
            ));
        }
        if alphas.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(AppError::Config("every alpha must be positive and finite".into()));
        }
        let shots = shots.or(file.shots).unwrap_or(default_shots);
        if mode == Mode::PeaHist && shots == 0 {
            return Err(AppError::Config("pea-hist needs at least one shot".into()));
        }
        let config = RunConfig {
            mode,
            grid,
            dim,
            rhs,
            alpha,
            n,
            n_override,
            resolution_shift: common.resolution_shift.or(file.resolution_shift).unwrap_or(0),
            shots,
            seed: common.seed.or(file.seed).unwrap_or(0),
            alphas,
            ideal_inversion: ideal_inversion || file.ideal_inversion.unwrap_or(false),
            qubit_cap: common.qubit_cap.or(file.qubit_cap).unwrap_or(DEFAULT_QUBIT_CAP),
            format: common.format.unwrap_or_default(),
            output: common.output.clone(),
            csv: common.csv.clone(),
        };
        config.problem()?;
        Ok(config)
    }

    pub fn problem(&self) -> Result<PoissonProblem, AppError> {
        let mut p =
            PoissonProblem::new(self.grid, self.dim, self.rhs.clone(), self.alpha).map_err(AppError::from)?;
        p.register_size = Some(self.n);
        p.resolution_shift = self.resolution_shift;
        p.shots = self.shots;
        p.seed = self.seed;
        p.qubit_cap = self.qubit_cap;
        p.validate().map_err(AppError::from)?;
        Ok(p)
    }

    /// Default register size when `n` was overridden to something else.
    pub fn n_warning(&self) -> Option<String> {
        let default = default_register_size(self.grid, self.dim);
        match self.n_override {
            Some(n) if n != default => Some(format!(
                "warning: n = {n} differs from the default {default} for M = {}, d = {}",
                self.grid, self.dim
            )),
            _ => None,
        }
    }
}

fn preset_e1(len: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[0] = 1.0;
    v
}

/// `e1`, an inline list like `1,0,0`, or a path to a file of numbers
/// separated by commas or whitespace.
pub fn parse_rhs(source: &str, len: usize) -> Result<Vec<f64>, AppError> {
    let source = source.trim();
    if source.eq_ignore_ascii_case("e1") {
        return Ok(preset_e1(len));
    }
    if let Ok(v) = parse_numbers(source) {
        return Ok(v);
    }
    let text = fs::read_to_string(source).map_err(|e| {
        AppError::Config(format!(
            "rhs {source:?} is neither a list nor a readable file: {e}"
        ))
    })?;
    parse_numbers(&text).map_err(|e| AppError::Config(format!("rhs file {source}: {e}")))
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("no values".into());
    }
    Ok(v)
}

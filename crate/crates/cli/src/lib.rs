//! Command-line front end: argument parsing, run configuration and dataset
//! writers for the swapchain scans.

pub mod angle;
pub mod commands;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use swapchain_core::chain::{ScanGrid, DEFAULT_K_MAX};
use swapchain_core::ChainParams;
use thiserror::Error;

pub use angle::{AlphaUnit, AngleLiteral};
pub use commands::{execute, ActivationTable, CommandConfig};
pub use table::{Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] swapchain_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "swapchain", version, about = "Datasets for CHSH activation by chained entanglement swapping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file; standard output when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Seed for randomized suites.
    #[arg(long, default_value_t = 2024, global = true)]
    pub seed: u64,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, env = "SWAPCHAIN_WORKERS", default_value_t = 0, global = true)]
    pub workers: usize,

    /// Meaning of the `pi` suffix in angle arguments.
    #[arg(long, value_enum, default_value_t = AlphaUnit::Pi, global = true)]
    pub alpha_unit: AlphaUnit,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CHSH verdicts for the wing states over an (alpha, p) grid.
    ScanInitial(GridArgs),
    /// Activation after n measurements over an (alpha, p) grid.
    ScanActivation {
        #[command(flatten)]
        grid: GridArgs,
        /// Even measurement counts to evaluate.
        #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10,12,14,16,18,20")]
        n_list: Vec<u32>,
        #[arg(long, value_enum, default_value_t = ActivationTable::Regions)]
        table: ActivationTable,
    },
    /// Critical number of measurements as a function of p1.
    CriticalNumber {
        #[arg(long)]
        p: f64,
        /// Comma-separated angles.
        #[arg(long, value_delimiter = ',', required_unless_present = "window_alphas", conflicts_with = "window_alphas")]
        alphas: Vec<AngleLiteral>,
        /// Use this many angles spread over the activating window for `p`.
        #[arg(long)]
        window_alphas: Option<usize>,
        #[arg(long, default_value_t = 0.001)]
        p1_min: f64,
        #[arg(long, default_value_t = 0.707)]
        p1_max: f64,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: u32,
    },
    /// Follow the all-Psi branch step by step and compare with the closed form.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest k; the chain then has 2(k - 1) measurements.
        #[arg(long, default_value_t = 8)]
        k: u32,
    },
    /// Enumerate every outcome configuration of up to `m_parties` measuring parties.
    Exhaustive {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 4)]
        m_parties: u32,
    },
    /// Randomized closed-form versus simulation suite.
    Verify {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value = "0.25pi")]
    pub alpha_min: AngleLiteral,
    #[arg(long, default_value = "0.75pi")]
    pub alpha_max: AngleLiteral,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    /// Points per axis.
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    /// Points along alpha; overrides --steps.
    #[arg(long)]
    pub alpha_steps: Option<usize>,
    /// Points along p; overrides --steps.
    #[arg(long)]
    pub p_steps: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub p1: f64,
}

impl GridArgs {
    fn resolve(&self, unit: AlphaUnit) -> ScanGrid {
        ScanGrid {
            alpha_min: self.alpha_min.resolve(unit),
            alpha_max: self.alpha_max.resolve(unit),
            p_min: self.p_min,
            p_max: self.p_max,
            alpha_steps: self.alpha_steps.unwrap_or(self.steps),
            p_steps: self.p_steps.unwrap_or(self.steps),
            p1: self.p1,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub alpha: AngleLiteral,
    #[arg(long)]
    pub p1: f64,
}

/// Fully resolved run description. Serialised into JSON output; the worker
/// count and output path do not affect results and are left out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub format: Format,
    pub seed: u64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub workers: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let unit = cli.alpha_unit;
        let command = match cli.command {
            Command::ScanInitial(grid) => CommandConfig::ScanInitial {
                grid: grid.resolve(unit),
            },
            Command::ScanActivation { grid, n_list, table } => CommandConfig::ScanActivation {
                grid: grid.resolve(unit),
                n_list,
                table,
            },
            Command::CriticalNumber {
                p,
                alphas,
                window_alphas,
                p1_min,
                p1_max,
                steps,
                k_max,
            } => {
                let alphas = match window_alphas {
                    Some(count) => commands::window_alphas(p, count)?,
                    None => alphas.iter().map(|a| a.resolve(unit)).collect(),
                };
                CommandConfig::CriticalNumber {
                    p,
                    alphas,
                    p1_min,
                    p1_max,
                    steps,
                    k_max,
                }
            }
            Command::Simulate { params, k } => CommandConfig::Simulate {
                params: params.resolve(unit)?,
                k,
            },
            Command::Exhaustive { params, m_parties } => CommandConfig::Exhaustive {
                params: params.resolve(unit)?,
                m_parties,
            },
            Command::Verify { samples } => CommandConfig::Verify { samples },
        };
        let config = Self {
            command,
            format: cli.format,
            seed: cli.seed,
            output: cli.output,
            workers: cli.workers,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.command.validate()
    }
}

impl ParamArgs {
    fn resolve(&self, unit: AlphaUnit) -> Result<ChainParams, CliError> {
        Ok(ChainParams::new(self.p, self.alpha.resolve(unit), self.p1)?)
    }
}

/// Runs the command on a pool of `config.workers` threads and writes the
/// table. Returns whether the run's own checks passed (only `verify` can fail
/// them).
pub fn run(config: &RunConfig) -> Result<bool, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()?;
    let outcome = pool.install(|| execute(config))?;
    if let Some(summary) = &outcome.summary {
        eprint!("{summary}");
    }
    write_output(config, &outcome.table)?;
    Ok(outcome.passed)
}

pub fn write_output(config: &RunConfig, table: &Table) -> Result<(), CliError> {
    match &config.output {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Output {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            write_table(config, table, &mut w).map_err(|e| match e {
                CliError::Io(source) => CliError::Output {
                    path: path.clone(),
                    source,
                },
                other => other,
            })?;
            w.flush().map_err(|source| CliError::Output {
                path: path.clone(),
                source,
            })
        }
        None => write_table(config, table, io::stdout().lock()),
    }
}

pub fn write_table(config: &RunConfig, table: &Table, out: impl Write) -> Result<(), CliError> {
    match config.format {
        Format::Csv => table.write_csv(out),
        Format::Json => table.write_json(config, out),
    }
}

//! `netrecon` command-line interface.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "netrecon", version, about = "Connectivity reconstruction for delayed Heaviside firing-rate networks")]
pub struct Cli {
    /// Root seed; overrides the seed in any config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// error, warn, info, debug or trace.
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate the network and write the firing schedule.
    Simulate(SimulateArgs),
    /// Reconstruct the connectivity from a firing schedule.
    Invert(InvertArgs),
    /// Singular-value diagnostics and decay classification per neuron.
    Diagnose(DiagnoseArgs),
    /// Run the error tables, or a single experiment with `--experiment`.
    Reproduce(ReproduceArgs),
    /// Perturb a schedule's intervals or the right-hand sides of its systems.
    NoiseApply(NoiseApplyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Euler,
    Exact,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Network config JSON. `s0` may be omitted; it is then drawn from U(0,1).
    #[arg(long)]
    pub config: PathBuf,
    /// Connectivity as CSV or JSON rows, or `symmetric` / `nonsymmetric`.
    #[arg(long)]
    pub connectivity: String,
    #[arg(long, value_enum, default_value = "euler")]
    pub method: Method,
    #[arg(long)]
    pub out_schedule: PathBuf,
    /// Resolved network config (with the drawn `s0`), for later `invert` calls.
    #[arg(long)]
    pub out_config: Option<PathBuf>,
    /// Drive trajectory CSV sampled every `--sample-dt`.
    #[arg(long)]
    pub out_trajectory: Option<PathBuf>,
    #[arg(long)]
    pub sample_dt: Option<f64>,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// fixed:<k>, rank, morozov-b:<noise-norm>, morozov-a or oracle.
    #[arg(long, default_value = "rank")]
    pub selection: String,
    /// Discrepancy safety factor.
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Noise-free schedule, required by `morozov-a`.
    #[arg(long)]
    pub clean_schedule: Option<PathBuf>,
    /// Interval provenance written by `noise-apply --out-origin`, required by `morozov-a`.
    #[arg(long)]
    pub origin: Option<PathBuf>,
    /// True connectivity, required by `oracle`; also enables error reporting.
    #[arg(long)]
    pub truth: Option<String>,
    #[arg(long)]
    pub out_connectivity: PathBuf,
    #[arg(long)]
    pub out_report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    /// Neuron index (0-based) or `all`.
    #[arg(long, default_value = "all")]
    pub neuron: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Single experiment config JSON instead of the table grid.
    #[arg(long)]
    pub experiment: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![20, 100])]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.05, 0.10])]
    pub levels: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, value_enum, default_value = "euler")]
    pub simulator: Method,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Rhs,
    Intervals,
}

#[derive(Args, Debug)]
pub struct NoiseApplyArgs {
    #[arg(long)]
    pub schedule: PathBuf,
    #[arg(long, value_enum)]
    pub target: Target,
    /// Relative noise level, e.g. 0.05.
    #[arg(long)]
    pub level: f64,
    /// Network config, required for `rhs`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Perturbed schedule (`intervals`) or perturbed right-hand sides (`rhs`).
    #[arg(long)]
    pub out: PathBuf,
    /// Provenance of the perturbed intervals.
    #[arg(long)]
    pub out_origin: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log_level).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}

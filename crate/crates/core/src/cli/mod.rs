//! Batch command-line front end.
//!
//! Every subcommand writes one artifact (instance, weight file or CSV table)
//! to `--out` or standard output, plus a one-line summary. The summary goes
//! to standard output when the artifact went to a file and to standard error
//! otherwise. Exit codes: 1 for runtime failures, 2 for malformed input,
//! 3 for violated assumptions and undefined ratios.

mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "propflow", version, about = "Proportional flow weights: compute, evaluate, simulate, learn")]
pub struct Cli {
    /// Seed for every random choice; required by stochastic subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Override the iteration budget of the weight computation.
    #[arg(long, global = true)]
    pub max_iters: Option<u64>,
    /// Also compute the exact optimum and report ratios.
    #[arg(long, global = true)]
    pub with_oracle: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance, trace or distribution file.
    Gen(GenArgs),
    /// Compute proportional weights for an instance.
    Weights(WeightsArgs),
    /// Route an instance offline with given weights.
    Eval(EvalArgs),
    /// Run online policies on a trace or against an adversary.
    Simulate(SimulateArgs),
    /// Learn weights from samples of a distribution.
    Learn(LearnArgs),
    /// Load balancing: machine weights, robustness and learning.
    Lb(LbArgs),
    /// Instance or parameter robustness sweep.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Bipartite,
    Layered,
    Dag,
    Worstcase,
    Lowerbound,
    FlowDistribution,
    Schedule,
    JobDistribution,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Offline nodes (advertisers, DAG nodes, or lower-bound n).
    #[arg(long, default_value_t = 4)]
    pub nodes: usize,
    #[arg(long, default_value_t = 4)]
    pub types: usize,
    /// Offline layers (layered, worstcase).
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Nodes per layer (layered).
    #[arg(long, default_value_t = 3)]
    pub width: usize,
    /// Edge probability (dag).
    #[arg(long, default_value_t = 0.4)]
    pub prob: f64,
    #[arg(long, default_value_t = 6)]
    pub max_capacity: i64,
    #[arg(long, default_value_t = 6)]
    pub max_count: i64,
    /// Early impressions of the lower-bound instance.
    #[arg(long, default_value_t = 1)]
    pub early: usize,
    /// Impressions per draw (flow-distribution).
    #[arg(long, default_value_t = 100)]
    pub impressions: usize,
    #[arg(long, default_value_t = 3)]
    pub machines: usize,
    #[arg(long, default_value_t = 10)]
    pub jobs: usize,
    #[arg(long, default_value_t = 5)]
    pub max_size: u32,
    /// Where to write the arrival trace (lowerbound).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Exact,
    Linear,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Exact)]
    pub schedule: ScheduleArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub instance: PathBuf,
    /// Weight file; all weights 1 when absent.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Take the counts from this trace instead of the instance.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Direct,
    Maximal,
    Greedy,
    Adaptive,
    All,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Instance file; not needed with `--adversary`.
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Arrival order; a seeded shuffle of the instance counts when absent.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// `worstcase:D` plays the adaptive adversary on the depth-D trees.
    #[arg(long)]
    pub adversary: Option<String>,
    #[arg(long, value_enum, default_value_t = PolicyArg::All)]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Weights to measure the prediction error against.
    #[arg(long)]
    pub reference_weights: Option<PathBuf>,
    /// Instance to measure the count distance against.
    #[arg(long)]
    pub reference_instance: Option<PathBuf>,
    /// Largest prediction error the adaptive policy tolerates.
    #[arg(long, default_value_t = 3.0)]
    pub eta_bound: f64,
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    pub distribution: PathBuf,
    /// Number of sampled instances; the sample-complexity formula when absent.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Monte Carlo trials for the evaluation block.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Constant in the capacity and load floors.
    #[arg(long, default_value_t = 1.0)]
    pub floor_constant: f64,
    /// Failure probability in the sample-complexity formula.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Do not check the capacity and load floors.
    #[arg(long)]
    pub skip_checks: bool,
}

#[derive(Debug, Args)]
pub struct LbArgs {
    /// Schedule instance; use `--distribution` instead to learn.
    pub instance: Option<PathBuf>,
    #[arg(long, conflicts_with = "instance")]
    pub distribution: Option<PathBuf>,
    /// Compare against this perturbed instance.
    #[arg(long)]
    pub against: Option<PathBuf>,
    /// Random per-type perturbations to check.
    #[arg(long, default_value_t = 0)]
    pub perturb: usize,
    #[arg(long, default_value_t = 0.5)]
    pub spread: f64,
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Constant `c` in the round count `c / delta^2 ln(m / delta)`.
    #[arg(long, default_value_t = crate::load_balancing::DEFAULT_ROUNDS_CONSTANT)]
    pub rounds_constant: f64,
    /// Constant in the expected-optimum floor of the distribution.
    #[arg(long, default_value_t = 1.0)]
    pub floor_constant: f64,
    /// Write the machine weights here.
    #[arg(long)]
    pub weights_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Instance,
    Parameter,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = SweepKind::Instance)]
    pub kind: SweepKind,
    /// Reference weights; computed from the instance when absent.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub rows: usize,
    #[arg(long, default_value_t = 10)]
    pub max_gamma: u32,
    /// Comma-separated perturbation levels for the parameter sweep.
    #[arg(long, default_value = "1,1.5,2", value_delimiter = ',')]
    pub eta: Vec<f64>,
}

/// Failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn runtime(message: impl fmt::Display) -> Self {
        CliError { code: 1, message: message.to_string() }
    }

    pub fn input(message: impl fmt::Display) -> Self {
        CliError { code: 2, message: message.to_string() }
    }

    pub fn assumption(message: impl fmt::Display) -> Self {
        CliError { code: 3, message: message.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// What a subcommand produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub artifact: String,
    pub summary: Option<String>,
    /// Extra files, written as given.
    pub extra: Vec<(PathBuf, String)>,
}

/// Runs a parsed command line and returns its output without touching the
/// file system.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    if !(cli.epsilon > 0.0 && cli.epsilon < 1.0) {
        return Err(CliError::input(format!("--epsilon must lie in (0, 1), got {}", cli.epsilon)));
    }
    commands::dispatch(cli)
}

fn log_enabled() -> bool {
    std::env::var("PROPFLOW_LOG").map_or(false, |v| !v.is_empty() && v != "0" && v != "off")
}

pub(crate) fn diag(msg: impl FnOnce() -> String) {
    if log_enabled() {
        eprintln!("[propflow] {}", msg());
    }
}

/// Parses `args`, runs, writes outputs and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli).and_then(|out| write_output(&cli, &out)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn write_output(cli: &Cli, out: &Output) -> Result<(), CliError> {
    for (path, text) in &out.extra {
        std::fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &out.artifact).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
            if let Some(s) = &out.summary {
                println!("{s}");
            }
        }
        None => {
            print!("{}", out.artifact);
            if let Some(s) = &out.summary {
                eprintln!("{s}");
            }
        }
    }
    Ok(())
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridchase_core::{CopStrategySpec, GridShape, Position, RobberStrategySpec};

#[derive(Debug, Parser)]
#[command(
    name = "gridchase",
    version,
    about = "Cops-and-robber pursuit on n-dimensional grids",
    args_override_self = true
)]
pub struct Cli {
    /// Read `key = value` defaults from a file; keys are long flag names.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one game and write its trace.
    Simulate(SimulateArgs),
    /// Run many games from random starts; write per-trial CSV and a summary.
    Experiment(ExperimentArgs),
    /// Check capture, evasion and parity claims.
    Verify(VerifyArgs),
    /// Count configurations by cop distance parity.
    Enumerate(EnumerateArgs),
    /// Steer the robber yourself from the terminal.
    Play(PlayArgs),
}

#[derive(Debug, Args)]
pub struct OutDir {
    /// Directory for output files without an explicit path.
    #[arg(long, env = "GRIDCHASE_OUT_DIR", default_value = ".", value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GameSetup {
    /// Grid shape such as `10x10` or `4x4x4`.
    #[arg(long)]
    pub shape: GridShape,

    /// Comma-separated cop strategies: `alg1:<i>`, `alg2s[:random-tie:<seed>]`,
    /// `random[:<seed>]`. Defaults to `alg1:0..alg1:<k-1>`, with k the number of
    /// initial cop positions or else the number of axes.
    #[arg(long, value_delimiter = ',')]
    pub cops: Vec<CopStrategySpec>,

    /// Initial cop positions separated by `;`, e.g. `0,0;2,2`.
    #[arg(long, value_name = "POSITIONS", requires = "init_robber")]
    pub init_cops: Option<String>,

    /// Initial robber position, e.g. `1,1`.
    #[arg(long, value_name = "POSITION", requires = "init_cops")]
    pub init_robber: Option<Position>,

    /// Seed for the random start and for randomized strategies.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Maximum number of robber jumps before the game counts as evaded.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub game: GameSetup,

    /// Robber strategy: `evader`, `evader:first-safe`, `greedy1`..`greedy3`
    /// (optionally `:random-tie:<seed>`), `scripted:<file>`, `random[:<seed>]`.
    #[arg(long, default_value = "greedy3")]
    pub robber: RobberStrategySpec,

    /// Trace file; defaults to `<out-dir>/game-<seed>.trace`.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,

    /// Print the trace to stdout instead of writing a file.
    #[arg(long)]
    pub print_trace: bool,

    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub shape: GridShape,

    /// Cop strategies as for `simulate`; defaults to one cyclic cop per axis.
    #[arg(long, value_delimiter = ',')]
    pub cops: Vec<CopStrategySpec>,

    #[arg(long, default_value = "greedy1")]
    pub robber: RobberStrategySpec,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,

    /// Master seed; trial seeds derive from it and the trial index.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: Option<u64>,

    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,

    /// Per-trial CSV; defaults to `<out-dir>/<name>.csv`.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,

    /// Summary file; defaults to `<out-dir>/<name>-summary.txt`.
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,

    /// Base name for default output files.
    #[arg(long, default_value = "experiment")]
    pub name: String,

    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    /// Trace invariants on random games.
    Lemma1,
    /// Capture by a cyclic cop within its favorable-jump budget.
    Lemma3,
    /// Sign commitment of a single two-dimensional cop.
    Lemma4,
    /// Evasion by fewer cops than axes from odd starts.
    Theorem1,
    /// Capture by one cyclic cop per axis within the bound.
    Theorem2,
    /// Capture by a single two-dimensional cop from even starts.
    Theorem3,
    /// Share of even starts.
    Theorem4,
    /// Trace invariants on trace files given with `--trace`.
    Trace,
    /// Every claim except `trace`.
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub claim: Claim,

    /// Comma-separated shapes; each claim has its own default list.
    #[arg(long, alias = "shape", value_delimiter = ',')]
    pub shapes: Vec<GridShape>,

    /// Cops for the evasion sweep; defaults to one fewer than the axes.
    #[arg(long)]
    pub cops: Option<usize>,

    /// Evasion horizon in robber jumps.
    #[arg(long, default_value_t = 1000)]
    pub horizon: u64,

    /// Random-cop games per start in the evasion sweep.
    #[arg(long, default_value_t = 2)]
    pub random_cop_games: u64,

    /// Search node budget per oracle call.
    #[arg(long, default_value_t = gridchase_core::verification::DEFAULT_NODE_BUDGET)]
    pub budget: u64,

    /// Random games for the trace-invariant and favorable-jump checks.
    #[arg(long, default_value_t = 1000)]
    pub random_traces: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Linear constant for the single-cop capture time; derived from the
    /// first shape when absent.
    #[arg(long)]
    pub constant: Option<u64>,

    /// Monte Carlo trials for the even-start share; 0 skips them.
    #[arg(long, default_value_t = 0)]
    pub mc_trials: u64,

    /// Trace files for `--claim trace`.
    #[arg(long, value_name = "FILE")]
    pub trace: Vec<PathBuf>,

    /// Also write all reports to this file.
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,

    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, alias = "shape", value_delimiter = ',', required = true)]
    pub shapes: Vec<GridShape>,

    /// Cops per configuration; defaults to one fewer than the axes, at least 1.
    #[arg(long)]
    pub cops: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[command(flatten)]
    pub game: GameSetup,
}

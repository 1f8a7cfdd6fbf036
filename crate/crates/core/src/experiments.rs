//! Monte Carlo harness: many games from uniform random starts.
//!
//! Trial `i` draws everything from `derive_trial_seed(master_seed, i)`, and
//! results are folded in trial order, so the summary does not depend on the
//! number of worker threads.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;

use crate::cops::{default_tick_cap, is_full_algorithm_one_set, CopStrategySpec, TieRule};
use crate::engine::{capture_bound, run, GameTrace, HalfStep, Outcome};
use crate::error::{Error, Result};
use crate::grid::{Configuration, GridShape, Position};
use crate::robbers::{GreedyTie, RobberStrategySpec};
use crate::seed::rng_from_seed;
use crate::verification::enumerate_parity_fraction;

pub use crate::seed::derive_trial_seed;

pub const TRIALS_CSV_HEADER: &str =
    "trial_index,seed,cop_positions,robber_position,outcome,robber_jumps,capture_half_step,capturing_cop";
pub const TRIALS_CSV_VERSION: &str = "# gridchase-trials v1";
pub const SUMMARY_VERSION: &str = "# gridchase-summary v1";

/// Trials folded per parallel batch.
const BATCH: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub shape: GridShape,
    pub cops: Vec<CopStrategySpec>,
    pub robber: RobberStrategySpec,
    pub trials: u64,
    pub master_seed: u64,
    /// `None` selects [`default_tick_cap`].
    pub tick_cap: Option<u64>,
    /// Worker threads; `0` uses every available core.
    pub workers: usize,
}

impl ExperimentSpec {
    pub fn new(shape: GridShape, cops: Vec<CopStrategySpec>, robber: RobberStrategySpec, trials: u64, master_seed: u64) -> Self {
        Self {
            shape,
            cops,
            robber,
            trials,
            master_seed,
            tick_cap: None,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Strategy("trials must be at least 1".into()));
        }
        if self.cops.is_empty() {
            return Err(Error::Strategy("at least one cop strategy is required".into()));
        }
        if self.tick_cap == Some(0) {
            return Err(Error::Strategy("tick cap must be positive".into()));
        }
        for c in &self.cops {
            c.validate(&self.shape)?;
        }
        if self.robber == RobberStrategySpec::Interactive {
            return Err(Error::Strategy("experiments cannot use the interactive robber".into()));
        }
        Ok(())
    }

    pub fn effective_tick_cap(&self) -> u64 {
        self.tick_cap
            .unwrap_or_else(|| default_tick_cap(&self.shape, &self.cops))
    }

    /// Evasion contradicts the capture bound for this cop set and cap.
    fn evasion_is_violation(&self) -> bool {
        is_full_algorithm_one_set(&self.cops, &self.shape) && self.effective_tick_cap() >= capture_bound(&self.shape)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub initial: Configuration,
    pub outcome: Outcome,
}

impl TrialRecord {
    pub fn robber_jumps(&self) -> u64 {
        match self.outcome {
            Outcome::Captured { robber_jumps, .. } => robber_jumps,
            Outcome::Evaded { tick_cap } => tick_cap,
        }
    }

    pub fn csv_row(&self) -> String {
        let cops = self
            .initial
            .cops
            .iter()
            .map(Position::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let (outcome, half, cop) = match self.outcome {
            Outcome::Captured { half_step, cop, .. } => ("captured", half_step.as_str(), cop.to_string()),
            Outcome::Evaded { .. } => ("evaded", "", String::new()),
        };
        format!(
            "{},{},\"{}\",\"{}\",{},{},{},{}",
            self.trial_index,
            self.seed,
            cops,
            self.initial.robber,
            outcome,
            self.robber_jumps(),
            half,
            cop
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StatsSummary {
    pub trials: u64,
    pub captures: u64,
    pub evasions: u64,
    /// Captures with zero robber jumps (terminating initial draws).
    pub initial_captures: u64,
    pub jump_sum: u128,
    pub jump_sq_sum: u128,
    pub min_jumps: Option<u64>,
    pub max_jumps: Option<u64>,
}

impl StatsSummary {
    pub fn record(&mut self, outcome: &Outcome) {
        self.trials += 1;
        match *outcome {
            Outcome::Captured {
                robber_jumps,
                half_step,
                ..
            } => {
                self.captures += 1;
                if half_step == HalfStep::Initial {
                    self.initial_captures += 1;
                }
                self.jump_sum += robber_jumps as u128;
                self.jump_sq_sum += (robber_jumps as u128) * (robber_jumps as u128);
                self.min_jumps = Some(self.min_jumps.map_or(robber_jumps, |m| m.min(robber_jumps)));
                self.max_jumps = Some(self.max_jumps.map_or(robber_jumps, |m| m.max(robber_jumps)));
            }
            Outcome::Evaded { .. } => self.evasions += 1,
        }
    }

    /// Mean robber jumps over captured trials.
    pub fn mean(&self) -> Option<f64> {
        (self.captures > 0).then(|| self.jump_sum as f64 / self.captures as f64)
    }

    /// Sample variance of robber jumps over captured trials.
    pub fn variance(&self) -> Option<f64> {
        let n = self.captures as u128;
        (n > 1).then(|| {
            let num = n * self.jump_sq_sum - self.jump_sum * self.jump_sum;
            num as f64 / (n * (n - 1)) as f64
        })
    }

    pub fn std_error(&self) -> Option<f64> {
        self.variance().map(|v| (v / self.captures as f64).sqrt())
    }

    pub fn capture_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.captures as f64 / self.trials as f64
        }
    }
}

/// Every agent uniformly and independently over all nodes: cops first, then
/// the robber, each drawn axis by axis.
pub fn random_initial_configuration(shape: &GridShape, m: usize, seed: u64) -> Configuration {
    let mut rng = rng_from_seed(seed);
    let mut draw = || Position::new(shape.dims().iter().map(|&d| rng.random_range(0..d)).collect());
    let cops = (0..m).map(|_| draw()).collect();
    Configuration::new(cops, draw())
}

pub fn run_trial(spec: &ExperimentSpec, trial_index: u64) -> Result<TrialRecord> {
    let seed = derive_trial_seed(spec.master_seed, trial_index);
    let wrap = |e: Error| Error::TrialFailed {
        trial: trial_index,
        seed,
        source: Box::new(e),
    };
    let initial = random_initial_configuration(&spec.shape, spec.cops.len(), seed);
    let mut cops = CopStrategySpec::build_all(&spec.cops, &spec.shape, seed).map_err(wrap)?;
    let mut robber = spec.robber.build(&spec.shape, seed).map_err(wrap)?;
    let trace = run(&spec.shape, &initial, robber.as_mut(), &mut cops, spec.effective_tick_cap()).map_err(wrap)?;
    let record = TrialRecord {
        trial_index,
        seed,
        initial,
        outcome: trace.outcome,
    };
    if !record.outcome.is_captured() && spec.evasion_is_violation() {
        return Err(wrap(Error::BoundViolated(format!(
            "a full cyclic cop set failed to capture within {} robber jumps",
            spec.effective_tick_cap()
        ))));
    }
    Ok(record)
}

/// One recorded game. Without `initial` the start is drawn from `seed`;
/// strategy randomness always derives from `seed`.
pub fn simulate_game(
    shape: &GridShape,
    cops: &[CopStrategySpec],
    robber: &RobberStrategySpec,
    initial: Option<Configuration>,
    seed: u64,
    tick_cap: Option<u64>,
) -> Result<GameTrace> {
    if cops.is_empty() {
        return Err(Error::Strategy("at least one cop is required".into()));
    }
    for c in cops {
        c.validate(shape)?;
    }
    let initial = initial.unwrap_or_else(|| random_initial_configuration(shape, cops.len(), seed));
    if initial.cop_count() != cops.len() {
        return Err(Error::Strategy(format!(
            "{} cop positions for {} cop strategies",
            initial.cop_count(),
            cops.len()
        )));
    }
    initial.validate(shape)?;
    let cap = tick_cap.unwrap_or_else(|| default_tick_cap(shape, cops));
    let mut cop_strats = CopStrategySpec::build_all(cops, shape, seed)?;
    let mut robber_strat = robber.build(shape, seed)?;
    let mut trace = run(shape, &initial, robber_strat.as_mut(), &mut cop_strats, cap)?;
    trace.meta.seed = Some(seed);
    Ok(trace)
}

/// Runs every trial, handing records to `sink` in trial order.
pub fn run_experiment<F>(spec: &ExperimentSpec, mut sink: F) -> Result<StatsSummary>
where
    F: FnMut(&TrialRecord) -> Result<()>,
{
    spec.validate()?;
    let mut stats = StatsSummary::default();
    let mut fold = |batch: Vec<Result<TrialRecord>>, stats: &mut StatsSummary| -> Result<()> {
        for rec in batch {
            let rec = rec?;
            stats.record(&rec.outcome);
            sink(&rec)?;
        }
        Ok(())
    };

    if spec.workers == 1 {
        for start in (0..spec.trials).step_by(BATCH as usize) {
            let end = (start + BATCH).min(spec.trials);
            fold((start..end).map(|i| run_trial(spec, i)).collect(), &mut stats)?;
        }
        return Ok(stats);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Strategy(format!("cannot start worker pool: {e}")))?;
    for start in (0..spec.trials).step_by(BATCH as usize) {
        let end = (start + BATCH).min(spec.trials);
        let batch: Vec<_> = pool.install(|| (start..end).into_par_iter().map(|i| run_trial(spec, i)).collect());
        fold(batch, &mut stats)?;
    }
    Ok(stats)
}

pub fn run_experiment_collect(spec: &ExperimentSpec) -> Result<(StatsSummary, Vec<TrialRecord>)> {
    let mut records = Vec::with_capacity(spec.trials.min(1 << 20) as usize);
    let stats = run_experiment(spec, |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok((stats, records))
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |x| format!("{x:.6}"))
}

fn fmt_opt_u64(v: Option<u64>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn tie_rules(spec: &ExperimentSpec) -> (String, String) {
    let robber = match &spec.robber {
        RobberStrategySpec::Greedy {
            tie: GreedyTie::NeighborOrder,
            ..
        } => "first maximal candidate in neighbor order (ascending axis, -1 before +1)".to_string(),
        RobberStrategySpec::Greedy {
            tie: GreedyTie::Random { seed },
            ..
        } => format!("uniform among maximal candidates, seed {seed}"),
        _ => "n/a".to_string(),
    };
    let cops = spec
        .cops
        .iter()
        .filter_map(|c| match c {
            CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Deterministic,
            } => Some("alg2s: axis 0 toward the robber".to_string()),
            CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Random { seed },
            } => Some(format!("alg2s: uniform neighbor, seed {seed}")),
            _ => None,
        })
        .collect::<Vec<_>>();
    let cops = if cops.is_empty() { "n/a".to_string() } else { cops.join("; ") };
    (robber, cops)
}

/// `key = value` summary echoing the full spec. Contains nothing that
/// depends on the worker count.
pub fn summary_text(spec: &ExperimentSpec, stats: &StatsSummary) -> String {
    let mut s = String::new();
    let (robber_tie, cop_tie) = tie_rules(spec);
    let cops = spec
        .cops
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let _ = writeln!(s, "{SUMMARY_VERSION}");
    let _ = writeln!(s, "shape = {}", spec.shape);
    let _ = writeln!(s, "cops = {cops}");
    let _ = writeln!(s, "robber = {}", spec.robber);
    let _ = writeln!(s, "robber_tie_rule = {robber_tie}");
    let _ = writeln!(s, "cop_tie_rule = {cop_tie}");
    let _ = writeln!(s, "trials = {}", spec.trials);
    let _ = writeln!(s, "master_seed = {}", spec.master_seed);
    let _ = writeln!(s, "tick_cap = {}", spec.effective_tick_cap());
    let _ = writeln!(s, "seed_derivation = splitmix64_mix(master_seed + (trial_index + 1) * 0x9E3779B97F4A7C15)");
    let _ = writeln!(s, "initial_draw = uniform per agent per axis, cops then robber, ChaCha8 seeded by trial seed");
    let _ = writeln!(s, "initial_capture_policy = terminating draws kept, counted as captures with 0 robber jumps");
    let _ = writeln!(s, "captures = {}", stats.captures);
    let _ = writeln!(s, "evasions = {}", stats.evasions);
    let _ = writeln!(s, "initial_captures = {}", stats.initial_captures);
    let _ = writeln!(s, "capture_rate = {:.6}", stats.capture_rate());
    let _ = writeln!(s, "mean_jumps = {}", fmt_opt_f64(stats.mean()));
    let _ = writeln!(s, "variance_jumps = {}", fmt_opt_f64(stats.variance()));
    let _ = writeln!(s, "stderr_mean_jumps = {}", fmt_opt_f64(stats.std_error()));
    let _ = writeln!(s, "min_jumps = {}", fmt_opt_u64(stats.min_jumps));
    let _ = writeln!(s, "max_jumps = {}", fmt_opt_u64(stats.max_jumps));
    let _ = writeln!(s, "jump_sum = {}", stats.jump_sum);
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEstimate {
    pub trials: u64,
    pub captures: u64,
    pub fraction: f64,
    /// Binomial standard error around 1/2.
    pub std_error: f64,
    /// Exact share of uniformly drawn starts at even Manhattan distance.
    pub exact_even_fraction: Ratio<u128>,
}

impl FrequencyEstimate {
    pub fn within_std_errors(&self, target: f64, k: f64) -> bool {
        (self.fraction - target).abs() <= k * self.std_error
    }
}

/// Capture frequency of one two-dimensional single cop from uniform random starts.
pub fn theorem4_frequency(
    shape: &GridShape,
    trials: u64,
    master_seed: u64,
    robber: RobberStrategySpec,
) -> Result<FrequencyEstimate> {
    if shape.n() != 2 {
        return Err(Error::Strategy(format!("needs a two-dimensional grid, got {shape}")));
    }
    let mut spec = ExperimentSpec::new(
        shape.clone(),
        vec![CopStrategySpec::AlgorithmTwo {
            tie: TieRule::Deterministic,
        }],
        robber,
        trials,
        master_seed,
    );
    spec.tick_cap = Some(20 * shape.side_sum());
    let stats = run_experiment(&spec, |_| Ok(()))?;
    Ok(FrequencyEstimate {
        trials,
        captures: stats.captures,
        fraction: stats.capture_rate(),
        std_error: (0.25 / trials as f64).sqrt(),
        exact_even_fraction: enumerate_parity_fraction(shape),
    })
}

//! Mechanized checks of the capture, evasion and parity results.
//!
//! Trace validators check per-tick properties of recorded games. Sweep
//! checks enumerate every initial configuration of a small grid and either
//! run the adversarial oracle or simulate the deterministic strategies
//! directly. Each check produces a [`ClaimReport`]; a `Violated` verdict
//! always carries a trace that reproduces the failure when replayed.

use std::fmt;

use num_rational::Ratio;

use crate::cops::{AlgorithmOne, AlgorithmTwo, CopStrategySpec, RandomCop, TieRule};
use crate::engine::{capture_bound, cop_distances, is_favorable_at, run, CopStrategy, GameTrace, Outcome};
use crate::error::{Error, Result};
use crate::grid::{manhattan_unchecked, Configuration, GridShape, Jump, Position};
use crate::robbers::{EvaderMode, ParityEvader, RobberStrategySpec, ScriptedRobber};
use crate::seed::derive_trial_seed;

pub mod oracle;

pub use oracle::{adversarial_survival, Survival, SurvivalOracle, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Violated {
        detail: String,
        witness: Box<GameTrace>,
    },
    /// The hypothesis does not apply to anything in scope.
    Inapplicable { reason: String },
    /// Holds as measured, but differs from the unqualified statement.
    Flagged { note: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated { .. } => "violated",
            Verdict::Inapplicable { .. } => "inapplicable",
            Verdict::Flagged { .. } => "flagged",
        }
    }

    /// Anything but a violation.
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Violated { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimReport {
    pub claim: String,
    pub scope: String,
    pub verdict: Verdict,
    pub checked: u64,
    pub inapplicable: u64,
    /// Extremal statistics, in insertion order.
    pub stats: Vec<(String, String)>,
}

impl ClaimReport {
    fn new(claim: &str, scope: impl Into<String>) -> Self {
        Self {
            claim: claim.to_string(),
            scope: scope.into(),
            verdict: Verdict::Holds,
            checked: 0,
            inapplicable: 0,
            stats: Vec::new(),
        }
    }

    pub fn stat(&self, key: &str) -> Option<&str> {
        self.stats.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn set_stat(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.stats.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.stats.push((key.to_string(), value)),
        }
    }

    fn violate(&mut self, detail: String, witness: GameTrace) {
        if self.verdict.passed() {
            self.verdict = Verdict::Violated {
                detail,
                witness: Box::new(witness),
            };
        }
    }

    pub fn witness(&self) -> Option<&GameTrace> {
        match &self.verdict {
            Verdict::Violated { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// Folds another report for the same claim into this one.
    pub fn merge(&mut self, other: ClaimReport) {
        self.checked += other.checked;
        self.inapplicable += other.inapplicable;
        if let Verdict::Violated { detail, witness } = other.verdict {
            self.violate(detail, *witness);
        }
        for (k, v) in other.stats {
            if self.stat(&k).is_none() {
                self.stats.push((k, v));
            }
        }
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim = {}", self.claim)?;
        writeln!(f, "scope = {}", self.scope)?;
        writeln!(f, "verdict = {}", self.verdict.label())?;
        match &self.verdict {
            Verdict::Violated { detail, .. } => writeln!(f, "detail = {detail}")?,
            Verdict::Inapplicable { reason } => writeln!(f, "detail = {reason}")?,
            Verdict::Flagged { note } => writeln!(f, "detail = {note}")?,
            Verdict::Holds => {}
        }
        writeln!(f, "checked = {}", self.checked)?;
        writeln!(f, "inapplicable = {}", self.inapplicable)?;
        for (k, v) in &self.stats {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Exact share of (cop, robber) node pairs at even Manhattan distance.
pub fn enumerate_parity_fraction(shape: &GridShape) -> Ratio<u128> {
    // Per axis, ceil(d/2)^2 + floor(d/2)^2 ordered pairs have an even gap.
    let (mut even, mut odd) = (1u128, 0u128);
    for &d in shape.dims() {
        let d = d as u128;
        let (hi, lo) = (d.div_ceil(2), d / 2);
        let e = hi * hi + lo * lo;
        let o = d * d - e;
        (even, odd) = (even * e + odd * o, even * o + odd * e);
    }
    Ratio::new(even, even + odd)
}

/// Configuration counts by cop distance parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCensus {
    pub nodes: u64,
    pub cops: usize,
    pub configurations: u128,
    /// Every cop at odd distance from the robber.
    pub all_odd: u128,
    /// Every cop at even distance from the robber.
    pub all_even: u128,
}

/// Largest node count [`parity_census`] walks.
pub const CENSUS_NODE_LIMIT: u64 = 1 << 24;

/// Exact parity census over every configuration of `cops` cops.
pub fn parity_census(shape: &GridShape, cops: usize) -> Result<ParityCensus> {
    let nodes = shape
        .node_count()
        .filter(|&n| n <= CENSUS_NODE_LIMIT)
        .ok_or_else(|| Error::OracleInfeasible(format!("{shape} has more than {CENSUS_NODE_LIMIT} nodes")))?;
    let overflow = || Error::OracleInfeasible(format!("configuration count of {shape} with {cops} cops overflows"));
    let configurations = (nodes as u128).checked_pow(cops as u32 + 1).ok_or_else(overflow)?;
    // Cop coordinates at an odd gap from robber coordinate `u` on a side `d`:
    // the coordinates of the other parity.
    let odd_gaps = |u: i64, d: i64| if u % 2 == 0 { d / 2 } else { (d + 1) / 2 };
    let (mut all_odd, mut all_even) = (0u128, 0u128);
    for robber in shape.positions() {
        // Fold axes: (even, odd) counts of cop nodes by total gap parity.
        let (mut even, mut odd) = (1u128, 0u128);
        for (axis, &d) in shape.dims().iter().enumerate() {
            let o = odd_gaps(robber.coord(axis), d) as u128;
            let e = d as u128 - o;
            (even, odd) = (even * e + odd * o, even * o + odd * e);
        }
        all_odd = all_odd.checked_add(odd.checked_pow(cops as u32).ok_or_else(overflow)?).ok_or_else(overflow)?;
        all_even = all_even.checked_add(even.checked_pow(cops as u32).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    Ok(ParityCensus {
        nodes,
        cops,
        configurations,
        all_odd,
        all_even,
    })
}

fn structural_check(trace: &GameTrace) -> Result<()> {
    trace.initial.validate(&trace.shape)?;
    let m = trace.initial.cop_count();
    for (k, rec) in trace.records.iter().enumerate() {
        let bad = |msg: &str| Error::TraceFormat(format!("tick {k}: {msg}"));
        if rec.cop_jumps.len() != m || rec.after_robber.cop_count() != m {
            return Err(bad("cop count changes"));
        }
        rec.after_robber.validate(&trace.shape).map_err(|e| bad(&e.to_string()))?;
        if let Some(c) = &rec.after_cops {
            if c.cop_count() != m {
                return Err(bad("cop count changes"));
            }
            c.validate(&trace.shape).map_err(|e| bad(&e.to_string()))?;
        }
        if rec.robber_jump.axis >= trace.shape.n() {
            return Err(bad("robber jump axis out of range"));
        }
    }
    Ok(())
}

/// Per-tick checks on one trace: unit distance change per half-step,
/// constant full-tick distance parity, every robber jump along axis `p`
/// favorable to cop `p+1 (mod n)`, and replay consistency.
pub fn check_trace_invariants(trace: &GameTrace) -> Result<ClaimReport> {
    structural_check(trace)?;
    let n = trace.shape.n();
    let mut report = ClaimReport::new(
        "trace-invariants",
        format!(
            "{} with {} cops ({}), robber {}, {} ticks",
            trace.shape,
            trace.initial.cop_count(),
            trace.meta.cops.join(","),
            trace.meta.robber,
            trace.records.len()
        ),
    );
    let initial_parity: Vec<u64> = cop_distances(&trace.initial).iter().map(|d| d % 2).collect();
    let mut before = trace.initial.clone();
    let mut favorable_checks = 0u64;

    for rec in &trace.records {
        let t = rec.tick;
        let d0 = cop_distances(&before);
        let d1 = cop_distances(&rec.after_robber);
        if let Some(i) = (0..d0.len()).find(|&i| d0[i].abs_diff(d1[i]) != 1) {
            report.violate(
                format!("unit change: cop {i} distance {} -> {} at the robber half-step of tick {t}", d0[i], d1[i]),
                trace.clone(),
            );
            break;
        }
        if let Some(after) = &rec.after_cops {
            let d2 = cop_distances(after);
            if let Some(i) = (0..d1.len()).find(|&i| d1[i].abs_diff(d2[i]) != 1) {
                report.violate(
                    format!("unit change: cop {i} distance {} -> {} at the cop half-step of tick {t}", d1[i], d2[i]),
                    trace.clone(),
                );
                break;
            }
            if let Some(i) = (0..d2.len()).find(|&i| d2[i] % 2 != initial_parity[i]) {
                report.violate(
                    format!("parity: cop {i} full-tick distance {} after tick {t} changed parity", d2[i]),
                    trace.clone(),
                );
                break;
            }
        }
        let target = (rec.robber_jump.axis + 1) % n;
        if target < before.cop_count() {
            favorable_checks += 1;
            if !is_favorable_at(target, &before.cops[target], &before.robber, rec.robber_jump) {
                report.violate(
                    format!("favorability: robber jump {} at tick {t} not favorable to cop {target}", rec.robber_jump),
                    trace.clone(),
                );
                break;
            }
        }
        before = rec.end().clone();
    }
    if report.verdict.passed() {
        if let Err(e) = trace.check_replay() {
            report.violate(format!("replay: {e}"), trace.clone());
        }
    }
    report.checked = 1;
    report.set_stat("ticks", trace.records.len());
    report.set_stat("favorability_checks", favorable_checks);
    Ok(report)
}

/// Axis offset of a cyclic-strategy cop, read from the trace metadata.
fn cyclic_offset(trace: &GameTrace, cop_index: usize) -> usize {
    trace
        .meta
        .cops
        .get(cop_index)
        .and_then(|name| name.parse::<CopStrategySpec>().ok())
        .and_then(|spec| match spec {
            CopStrategySpec::AlgorithmOne { index } => Some(index),
            _ => None,
        })
        .unwrap_or(cop_index % trace.shape.n())
}

/// Capture by a cyclic-strategy cop no later than the tick in which the
/// robber's jumps favorable to it reach `sum d_j`.
pub fn check_lemma3(trace: &GameTrace, cop_index: usize, shape: &GridShape) -> Result<ClaimReport> {
    structural_check(trace)?;
    if cop_index >= trace.initial.cop_count() {
        return Err(Error::Strategy(format!("no cop {cop_index} in the trace")));
    }
    let offset = cyclic_offset(trace, cop_index);
    let bound = shape.side_sum();
    let mut report = ClaimReport::new(
        "lemma3",
        format!("{shape}, cop {cop_index} with axis offset {offset}, bound {bound} favorable jumps"),
    );
    let mut before = &trace.initial;
    let mut favorable = 0u64;
    for rec in &trace.records {
        if is_favorable_at(offset, &before.cops[cop_index], &before.robber, rec.robber_jump) {
            favorable += 1;
        }
        if favorable >= bound && rec.capture.is_none() {
            report.violate(
                format!(
                    "{favorable} favorable jumps by tick {} without capture (bound {bound})",
                    rec.tick
                ),
                trace.clone(),
            );
            break;
        }
        before = rec.end();
    }
    report.checked = 1;
    report.set_stat("favorable_jumps", favorable);
    report.set_stat("bound", bound);
    Ok(report)
}

/// For a single two-dimensional cop from an even start: once the cop moves
/// along an axis, the sign of `cop - robber` on that axis never flips.
pub fn check_lemma4(trace: &GameTrace) -> Result<ClaimReport> {
    structural_check(trace)?;
    let mut report = ClaimReport::new("lemma4", format!("{}, robber {}", trace.shape, trace.meta.robber));
    if trace.shape.n() != 2 || trace.initial.cop_count() != 1 {
        report.verdict = Verdict::Inapplicable {
            reason: "needs one cop on a two-dimensional grid".into(),
        };
        report.inapplicable = 1;
        return Ok(report);
    }
    if manhattan_unchecked(&trace.initial.cops[0], &trace.initial.robber) % 2 == 1 {
        report.verdict = Verdict::Inapplicable {
            reason: "initial distance is odd".into(),
        };
        report.inapplicable = 1;
        return Ok(report);
    }
    // Sign of cop - robber the cop committed to on each axis.
    let mut committed: [Option<i64>; 2] = [None, None];
    for rec in &trace.records {
        let Some(after) = &rec.after_cops else { break };
        if let Some(j) = rec.cop_jumps[0] {
            committed[j.axis].get_or_insert(-j.direction.sign());
        }
        for axis in 0..2 {
            if let Some(sign) = committed[axis] {
                let now = (after.cops[0].coord(axis) - after.robber.coord(axis)).signum();
                if now == -sign {
                    report.violate(
                        format!("axis {axis} sign flipped after tick {}", rec.tick),
                        trace.clone(),
                    );
                    return Ok(report);
                }
            }
        }
    }
    report.checked = 1;
    Ok(report)
}

fn all_configurations(shape: &GridShape, m: usize) -> impl Iterator<Item = Configuration> + '_ {
    let nodes = shape.node_count().expect("grid too large to enumerate");
    let total = nodes.pow(m as u32 + 1);
    (0..total).map(move |mut id| {
        let robber = shape.position_at(id % nodes);
        id /= nodes;
        let cops = (0..m)
            .map(|_| {
                let c = shape.position_at(id % nodes);
                id /= nodes;
                c
            })
            .collect();
        Configuration::new(cops, robber)
    })
}

/// Replays an oracle line as an engine game, producing a witness trace.
fn oracle_witness<C: CopStrategy>(
    oracle: &mut SurvivalOracle<'_, C>,
    shape: &GridShape,
    cops: &[CopStrategySpec],
    initial: &Configuration,
    length: u64,
) -> Result<GameTrace> {
    let line = oracle.best_line(initial, length)?;
    let cap = line.len().max(1) as u64;
    let mut robber = ScriptedRobber::with_label(line, "oracle-line");
    let mut strategies = CopStrategySpec::build_all(cops, shape, 0)?;
    run(shape, initial, &mut robber, &mut strategies, cap)
}

/// Every initial configuration of `n` cyclic-strategy cops and the robber,
/// searched adversarially: all captured within `n * sum d_i` robber jumps.
pub fn check_theorem2(shape: &GridShape, node_budget: u64) -> Result<ClaimReport> {
    let specs = CopStrategySpec::full_algorithm_one_set(shape);
    let bound = capture_bound(shape);
    let mut cops: Vec<AlgorithmOne> = (0..shape.n()).map(AlgorithmOne::new).collect();
    let mut oracle = SurvivalOracle::new(shape, &mut cops, node_budget)?;
    let mut report = ClaimReport::new(
        "theorem2",
        format!("{shape}, cops alg1:0..alg1:{}, every initial configuration, bound {bound}", shape.n() - 1),
    );
    let mut worst = 0u64;
    let mut failure = None;
    for init in all_configurations(shape, shape.n()) {
        report.checked += 1;
        match oracle.survival(&init)? {
            Survival::Finite(v) if v <= bound => worst = worst.max(v),
            other => {
                failure = Some((init, other));
                break;
            }
        }
    }
    report.set_stat("max_capture_jumps", worst);
    report.set_stat("bound", bound);
    report.set_stat("states_expanded", oracle.expanded());
    if let Some((init, value)) = failure {
        let witness = oracle_witness(&mut oracle, shape, &specs, &init, bound + 1)?;
        report.violate(format!("robber survives {value:?} from {init}"), witness);
    }
    Ok(report)
}

/// Options for the evasion sweep.
#[derive(Debug, Clone, Copy)]
pub struct EvasionOptions {
    pub horizon: u64,
    /// Random-cop games per applicable configuration.
    pub random_cop_games: u64,
    pub seed: u64,
}

impl Default for EvasionOptions {
    fn default() -> Self {
        Self {
            horizon: 1000,
            random_cop_games: 2,
            seed: 0,
        }
    }
}

/// Fewer than `n` cops, all at odd distance: the parity evader survives to
/// the horizon against every cyclic-strategy index assignment and against
/// randomly moving cops.
pub fn check_theorem1(shape: &GridShape, m: usize, opts: EvasionOptions) -> Result<ClaimReport> {
    let n = shape.n();
    let mut report = ClaimReport::new(
        "theorem1",
        format!(
            "{shape}, {m} cops at odd distance, parity evader, horizon {}, {} alg1 assignments + {} random-cop games per start",
            opts.horizon,
            n.pow(m as u32),
            opts.random_cop_games
        ),
    );
    if m == 0 || m >= n {
        report.verdict = Verdict::Inapplicable {
            reason: format!("needs 1 <= m < n, got m = {m}, n = {n}"),
        };
        return Ok(report);
    }
    let assignments: Vec<Vec<usize>> = (0..n.pow(m as u32))
        .map(|mut k| {
            (0..m)
                .map(|_| {
                    let i = k % n;
                    k /= n;
                    i
                })
                .collect()
        })
        .collect();

    let mut games = 0u64;
    let mut random_stream = 0u64;
    'configs: for init in all_configurations(shape, m) {
        if cop_distances(&init).iter().any(|d| d % 2 == 0) {
            report.inapplicable += 1;
            continue;
        }
        report.checked += 1;
        for assignment in &assignments {
            let mut cops: Vec<AlgorithmOne> = assignment.iter().map(|&i| AlgorithmOne::new(i)).collect();
            let mut robber = ParityEvader::new(EvaderMode::MaxMin);
            let trace = run(shape, &init, &mut robber, &mut cops, opts.horizon)?;
            games += 1;
            if trace.outcome.is_captured() {
                report.violate(format!("captured from {init} by cyclic cops {assignment:?}"), trace);
                break 'configs;
            }
        }
        for _ in 0..opts.random_cop_games {
            let seed = derive_trial_seed(opts.seed, random_stream);
            random_stream += 1;
            let mut cops: Vec<RandomCop> = (0..m)
                .map(|i| RandomCop::new(derive_trial_seed(seed, i as u64)))
                .collect();
            let mut robber = ParityEvader::new(EvaderMode::MaxMin);
            let mut trace = run(shape, &init, &mut robber, &mut cops, opts.horizon)?;
            trace.meta.seed = Some(seed);
            games += 1;
            if trace.outcome.is_captured() {
                report.violate(format!("captured from {init} by random cops"), trace);
                break 'configs;
            }
        }
    }
    if report.checked == 0 && report.verdict.passed() {
        report.verdict = Verdict::Inapplicable {
            reason: "no initial configuration has every cop at odd distance".into(),
        };
    }
    report.set_stat("games", games);
    report.set_stat("horizon", opts.horizon);
    Ok(report)
}

/// Smallest `c` with `t_max <= c * (d_0 + d_1)`.
pub fn linear_constant(t_max: u64, shape: &GridShape) -> u64 {
    t_max.div_ceil(shape.side_sum())
}

/// One two-dimensional single cop, every even-distance start searched
/// adversarially: always captured, and within `c * (d_0 + d_1)` robber jumps
/// when `constant` is given.
pub fn check_theorem3_and_5(shape: &GridShape, constant: Option<u64>, node_budget: u64) -> Result<ClaimReport> {
    if shape.n() != 2 {
        return Err(Error::Strategy(format!("needs a two-dimensional grid, got {shape}")));
    }
    let spec = [CopStrategySpec::AlgorithmTwo {
        tie: TieRule::Deterministic,
    }];
    let mut cops = vec![AlgorithmTwo::new(TieRule::Deterministic)];
    let mut oracle = SurvivalOracle::new(shape, &mut cops, node_budget)?;
    let mut report = ClaimReport::new(
        "theorem3",
        format!(
            "{shape}, one alg2s cop, every even-distance start{}",
            constant.map_or(String::new(), |c| format!(", linear bound {c}*(d0+d1)"))
        ),
    );
    let mut t_max = 0u64;
    let mut failure = None;
    for init in all_configurations(shape, 1) {
        if manhattan_unchecked(&init.cops[0], &init.robber) % 2 == 1 {
            report.inapplicable += 1;
            continue;
        }
        report.checked += 1;
        match oracle.survival(&init)? {
            Survival::Finite(v) => t_max = t_max.max(v),
            Survival::Unbounded => {
                failure = Some((init, "robber survives forever".to_string()));
                break;
            }
        }
    }
    report.set_stat("t_max", t_max);
    report.set_stat("side_sum", shape.side_sum());
    report.set_stat("smallest_constant", linear_constant(t_max, shape));
    if let Some(c) = constant {
        report.set_stat("linear_bound", c * shape.side_sum());
        if failure.is_none() && t_max > c * shape.side_sum() {
            let init = all_configurations(shape, 1)
                .filter(|i| manhattan_unchecked(&i.cops[0], &i.robber) % 2 == 0)
                .find(|i| matches!(oracle.survival(i), Ok(Survival::Finite(v)) if v == t_max))
                .expect("t_max is attained");
            failure = Some((init, format!("capture takes {t_max} > {} robber jumps", c * shape.side_sum())));
        }
    }
    report.set_stat("states_expanded", oracle.expanded());
    if let Some((init, detail)) = failure {
        let len = t_max.max(4 * shape.side_sum());
        let witness = oracle_witness(&mut oracle, shape, &spec, &init, len)?;
        report.violate(format!("{detail} from {init}"), witness);
    }
    Ok(report)
}

/// Exact even-start share, flagged when it differs from one half.
pub fn check_theorem4(shape: &GridShape) -> ClaimReport {
    let frac = enumerate_parity_fraction(shape);
    let mut report = ClaimReport::new("theorem4", format!("{shape}, all (cop, robber) node pairs"));
    report.checked = shape.node_count().map_or(0, |n| n * n);
    report.set_stat("even_fraction", frac);
    report.set_stat("even_fraction_decimal", format!("{:.6}", *frac.numer() as f64 / *frac.denom() as f64));
    let half = Ratio::new(1u128, 2);
    if frac != half {
        let side = if frac > half { "above" } else { "below" };
        report.verdict = Verdict::Flagged {
            note: format!(
                "even-start share {frac} is {side} 1/2; the capture rate of a single cop equals this share, not 1/2, when some side is odd"
            ),
        };
    }
    report
}

/// Shapes and strategy mixes used for randomized trace checking.
pub fn default_trace_shapes() -> Vec<GridShape> {
    ["3x3", "10x10", "4x4x4"]
        .iter()
        .map(|s| s.parse().expect("valid shape"))
        .collect()
}

/// One randomized game: shape, cop mix and robber all derived from `seed`.
pub fn random_game(shapes: &[GridShape], seed: u64) -> Result<GameTrace> {
    use rand::Rng;
    let mut rng = crate::seed::rng_from_seed(seed);
    let shape = &shapes[rng.random_range(0..shapes.len())];
    let n = shape.n();
    let cops: Vec<CopStrategySpec> = match rng.random_range(0..4) {
        0 => CopStrategySpec::full_algorithm_one_set(shape),
        1 if n == 2 => vec![CopStrategySpec::AlgorithmTwo {
            tie: TieRule::Deterministic,
        }],
        2 => (0..rng.random_range(1..=n))
            .map(|_| CopStrategySpec::AlgorithmOne {
                index: rng.random_range(0..n),
            })
            .collect(),
        _ => (0..rng.random_range(1..=n + 1))
            .map(|_| CopStrategySpec::Random { seed: rng.random() })
            .collect(),
    };
    let initial = crate::experiments::random_initial_configuration(shape, cops.len(), rng.random());
    let evader_ok = cops.len() < n && cop_distances(&initial).iter().all(|d| d % 2 == 1);
    let robber: RobberStrategySpec = match rng.random_range(0..5) {
        0 => RobberStrategySpec::greedy(1),
        1 => RobberStrategySpec::greedy(2),
        2 => RobberStrategySpec::greedy(3),
        3 if evader_ok => "evader".parse()?,
        _ => RobberStrategySpec::Random { seed: rng.random() },
    };
    let mut cop_strats = CopStrategySpec::build_all(&cops, shape, seed)?;
    let mut robber_strat = robber.build(shape, seed)?;
    let cap = crate::cops::default_tick_cap(shape, &cops);
    let mut trace = run(shape, &initial, robber_strat.as_mut(), &mut cop_strats, cap)?;
    trace.meta.seed = Some(seed);
    Ok(trace)
}

/// Trace invariants over `count` randomized games.
pub fn check_random_traces(shapes: &[GridShape], count: u64, master_seed: u64) -> Result<ClaimReport> {
    let names: Vec<String> = shapes.iter().map(ToString::to_string).collect();
    let mut report = ClaimReport::new(
        "lemma1",
        format!("{count} random games on {}, mixed strategies, master seed {master_seed}", names.join(", ")),
    );
    let mut ticks = 0u64;
    let mut favorability = 0u64;
    for i in 0..count {
        let trace = random_game(shapes, derive_trial_seed(master_seed, i))?;
        let r = check_trace_invariants(&trace)?;
        ticks += trace.records.len() as u64;
        favorability += r.stat("favorability_checks").and_then(|v| v.parse::<u64>().ok()).unwrap_or(0);
        report.checked += 1;
        if let Verdict::Violated { detail, witness } = r.verdict {
            report.violate(detail, *witness);
            break;
        }
    }
    report.set_stat("ticks_checked", ticks);
    report.set_stat("favorability_checks", favorability);
    Ok(report)
}

/// Favorable-jump budget check over traces of cyclic-strategy cops from random starts.
pub fn check_lemma3_random(shape: &GridShape, count: u64, master_seed: u64) -> Result<ClaimReport> {
    let specs = CopStrategySpec::full_algorithm_one_set(shape);
    let mut report = ClaimReport::new(
        "lemma3",
        format!("{count} games on {shape}, cops alg1:0..alg1:{}, greedy and random robbers", shape.n() - 1),
    );
    let robbers = [
        RobberStrategySpec::greedy(1),
        RobberStrategySpec::greedy(2),
        RobberStrategySpec::greedy(3),
        RobberStrategySpec::Random { seed: master_seed },
    ];
    let mut max_favorable = 0u64;
    for i in 0..count {
        let seed = derive_trial_seed(master_seed, i);
        let init = crate::experiments::random_initial_configuration(shape, specs.len(), seed);
        let robber_spec = &robbers[(i % robbers.len() as u64) as usize];
        let mut robber = robber_spec.build(shape, seed)?;
        let mut cops = CopStrategySpec::build_all(&specs, shape, seed)?;
        let mut trace = run(shape, &init, robber.as_mut(), &mut cops, crate::cops::default_tick_cap(shape, &specs))?;
        trace.meta.seed = Some(seed);
        for cop in 0..specs.len() {
            let r = check_lemma3(&trace, cop, shape)?;
            if let Some(f) = r.stat("favorable_jumps").and_then(|v| v.parse::<u64>().ok()) {
                if matches!(trace.outcome, Outcome::Captured { cop: c, .. } if c == cop) {
                    max_favorable = max_favorable.max(f);
                }
            }
            report.merge(r);
        }
        if !report.verdict.passed() {
            break;
        }
    }
    report.set_stat("max_favorable_at_capture", max_favorable);
    report.set_stat("bound", shape.side_sum());
    Ok(report)
}

/// Sign-commitment check over every even-start game of one two-dimensional cop.
pub fn check_lemma4_sweep(shape: &GridShape, robbers: &[RobberStrategySpec]) -> Result<ClaimReport> {
    let mut report = ClaimReport::new("lemma4", format!("{shape}, one alg2s cop, every even-distance start"));
    for init in all_configurations(shape, 1) {
        if manhattan_unchecked(&init.cops[0], &init.robber) % 2 == 1 {
            report.inapplicable += 1;
            continue;
        }
        for spec in robbers {
            let mut robber = spec.build(shape, 0)?;
            let mut cops = vec![AlgorithmTwo::new(TieRule::Deterministic)];
            let trace = run(shape, &init, robber.as_mut(), &mut cops, 20 * shape.side_sum())?;
            let mut r = check_lemma4(&trace)?;
            r.inapplicable = 0;
            report.merge(r);
        }
    }
    Ok(report)
}

/// Cop positions given as `x,y;x,y`.
pub fn parse_positions(s: &str) -> Result<Vec<Position>> {
    s.split(';').map(str::parse).collect()
}

/// The robber jumps of a trace, for replaying it with a scripted robber.
pub fn robber_script(trace: &GameTrace) -> Vec<Jump> {
    trace.records.iter().map(|r| r.robber_jump).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robbers::ScriptedRobber;

    fn brute_force_even_pairs(shape: &GridShape) -> (u128, u128) {
        let nodes: Vec<Position> = shape.positions().collect();
        let mut even = 0u128;
        for a in &nodes {
            for b in &nodes {
                if manhattan_unchecked(a, b) % 2 == 0 {
                    even += 1;
                }
            }
        }
        (even, (nodes.len() * nodes.len()) as u128)
    }

    #[test]
    fn parity_fraction_matches_enumeration() {
        for s in ["2x2", "3x3", "10x10", "3x4", "5x7", "2x3x3"] {
            let g: GridShape = s.parse().unwrap();
            let (even, total) = brute_force_even_pairs(&g);
            assert_eq!(enumerate_parity_fraction(&g), Ratio::new(even, total), "{s}");
        }
    }

    #[test]
    fn parity_fraction_examples() {
        let half = Ratio::new(1u128, 2);
        assert_eq!(enumerate_parity_fraction(&"10x10".parse().unwrap()), half);
        assert_eq!(enumerate_parity_fraction(&"2x2".parse().unwrap()), half);
        // 41 of 81 pairs.
        assert_eq!(enumerate_parity_fraction(&"3x3".parse().unwrap()), Ratio::new(41, 81));
    }

    fn sample_trace() -> GameTrace {
        let g: GridShape = "5x5".parse().unwrap();
        let init = Configuration::new(vec![[0, 0].into(), [4, 4].into()], [2, 2].into());
        let mut robber = ScriptedRobber::new(vec![Jump::plus(0), Jump::plus(0), Jump::minus(1), Jump::minus(1)]);
        let mut cops = vec![AlgorithmOne::new(0), AlgorithmOne::new(1)];
        run(&g, &init, &mut robber, &mut cops, 4).unwrap()
    }

    #[test]
    fn engine_trace_holds() {
        let t = sample_trace();
        let r = check_trace_invariants(&t).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        // Every jump in the sample is checked against cop (p+1) mod 2.
        assert_eq!(r.stat("favorability_checks"), Some(t.records.len().to_string().as_str()));
    }

    #[test]
    fn corrupted_distance_is_violated() {
        let mut t = sample_trace();
        let after = t.records[1].after_cops.as_mut().unwrap();
        let c = after.cops[0].coords().to_vec();
        after.cops[0] = Position::new(vec![c[0], c[1] + 1]);
        let r = check_trace_invariants(&t).unwrap();
        match &r.verdict {
            Verdict::Violated { detail, .. } => assert!(detail.contains("tick 1"), "{detail}"),
            v => panic!("expected violation, got {v:?}"),
        }
    }

    #[test]
    fn malformed_trace_is_an_error() {
        let mut t = sample_trace();
        t.records[0].after_robber.cops.pop();
        assert!(matches!(check_trace_invariants(&t), Err(Error::TraceFormat(_))));
    }

    #[test]
    fn initial_capture_trace_holds_lemma3() {
        let g: GridShape = "3x3".parse().unwrap();
        let init = Configuration::new(vec![[1, 1].into(), [0, 0].into()], [1, 1].into());
        let mut robber = ScriptedRobber::new(vec![]);
        let mut cops = vec![AlgorithmOne::new(0), AlgorithmOne::new(1)];
        let t = run(&g, &init, &mut robber, &mut cops, 5).unwrap();
        assert!(check_lemma3(&t, 0, &g).unwrap().verdict.passed());
    }

    #[test]
    fn census_matches_brute_force() {
        for (s, m) in [("3x3", 1), ("3x3", 2), ("2x2x2", 2), ("4x3", 1)] {
            let g: GridShape = s.parse().unwrap();
            let c = parity_census(&g, m).unwrap();
            let (mut odd, mut even, mut total) = (0u128, 0u128, 0u128);
            for cfg in all_configurations(&g, m) {
                total += 1;
                let d = cop_distances(&cfg);
                odd += d.iter().all(|x| x % 2 == 1) as u128;
                even += d.iter().all(|x| x % 2 == 0) as u128;
            }
            assert_eq!((c.configurations, c.all_odd, c.all_even), (total, odd, even), "{s} m={m}");
        }
        // 40 of 81 single-cop starts on 3x3 are odd.
        assert_eq!(parity_census(&"3x3".parse().unwrap(), 1).unwrap().all_odd, 40);
    }

    #[test]
    fn theorem4_report_flags_odd_sides() {
        assert_eq!(check_theorem4(&"10x10".parse().unwrap()).verdict, Verdict::Holds);
        let r = check_theorem4(&"3x3".parse().unwrap());
        assert!(matches!(r.verdict, Verdict::Flagged { .. }));
        assert_eq!(r.stat("even_fraction"), Some("41/81"));
    }

    #[test]
    fn theorem1_inapplicable_cases() {
        let g: GridShape = "3x3".parse().unwrap();
        let r = check_theorem1(&g, 2, EvasionOptions::default()).unwrap();
        assert!(matches!(r.verdict, Verdict::Inapplicable { .. }));
    }
}

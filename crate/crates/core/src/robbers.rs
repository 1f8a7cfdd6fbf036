//! Robber strategies.
//!
//! The greedy robbers score every neighbor by a distance sum to all cops and
//! jump to the best one. The parity evader survives forever against fewer
//! than `n` cops that all start at odd Manhattan distance: at full ticks no
//! cop can share its node, and with at least `n` neighbors and fewer than `n`
//! cops it always has an unoccupied neighbor to jump to.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::engine::RobberStrategy;
use crate::error::{Error, Result};
use crate::grid::{manhattan_unchecked, neighbor_jumps, Configuration, GridShape, Jump, Position};
use crate::seed::{derive_trial_seed, rng_from_seed, GameRng};

/// Relative tolerance under which two Euclidean-sum scores count as tied.
pub const EUCLIDEAN_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreedyMetric {
    /// Sum over cops of squared Euclidean distance (`greedy1`).
    SumSquaredEuclidean,
    /// Sum over cops of Manhattan distance (`greedy2`).
    SumManhattan,
    /// Sum over cops of Euclidean distance (`greedy3`).
    SumEuclidean,
}

impl GreedyMetric {
    pub fn number(self) -> u8 {
        match self {
            GreedyMetric::SumSquaredEuclidean => 1,
            GreedyMetric::SumManhattan => 2,
            GreedyMetric::SumEuclidean => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GreedyTie {
    /// First maximal candidate in neighbor order.
    NeighborOrder,
    /// Uniform among the maximal candidates.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Score {
    Exact(u128),
    Approx(f64),
}

impl Score {
    /// `Greater` only when `self` beats `other` beyond the tie tolerance.
    fn compare(self, other: Score) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => a.cmp(&b),
            (Score::Approx(a), Score::Approx(b)) => {
                let tol = EUCLIDEAN_TIE_TOLERANCE * a.abs().max(b.abs());
                if a > b + tol {
                    Greater
                } else if b > a + tol {
                    Less
                } else {
                    Equal
                }
            }
            _ => unreachable!("scores of one metric share a representation"),
        }
    }
}

fn squared_euclidean(p: &Position, q: &Position) -> u128 {
    p.coords()
        .iter()
        .zip(q.coords())
        .map(|(a, b)| {
            let d = a.abs_diff(*b) as u128;
            d * d
        })
        .sum()
}

fn score(metric: GreedyMetric, candidate: &Position, cops: &[Position]) -> Score {
    match metric {
        GreedyMetric::SumSquaredEuclidean => Score::Exact(cops.iter().map(|c| squared_euclidean(candidate, c)).sum()),
        GreedyMetric::SumManhattan => {
            Score::Exact(cops.iter().map(|c| manhattan_unchecked(candidate, c) as u128).sum())
        }
        GreedyMetric::SumEuclidean => Score::Approx(
            cops.iter()
                .map(|c| (squared_euclidean(candidate, c) as f64).sqrt())
                .sum(),
        ),
    }
}

/// Jumps to the neighbor maximizing the metric, ties resolved by `tie_rng`
/// when given and by neighbor order otherwise.
pub fn greedy_next(
    metric: GreedyMetric,
    config: &Configuration,
    shape: &GridShape,
    tie_rng: Option<&mut GameRng>,
) -> Result<Jump> {
    shape.check(&config.robber)?;
    let mut best: Vec<Jump> = Vec::with_capacity(2 * shape.n());
    let mut best_score: Option<Score> = None;
    for jump in neighbor_jumps(&config.robber, shape) {
        let s = score(metric, &jump.apply_unchecked(&config.robber), &config.cops);
        match best_score.map(|b| s.compare(b)) {
            None | Some(std::cmp::Ordering::Greater) => {
                best.clear();
                best.push(jump);
                best_score = Some(s);
            }
            Some(std::cmp::Ordering::Equal) => best.push(jump),
            Some(std::cmp::Ordering::Less) => {}
        }
    }
    match tie_rng {
        Some(rng) if best.len() > 1 => Ok(best[rng.random_range(0..best.len())]),
        _ => Ok(best[0]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvaderMode {
    /// Safe neighbor maximizing the distance to the nearest cop.
    MaxMin,
    /// First safe neighbor in neighbor order.
    FirstSafe,
}

/// The evading move for fewer than `n` cops, all at odd distance.
pub fn parity_evader_next(config: &Configuration, shape: &GridShape, mode: EvaderMode) -> Result<Jump> {
    config.validate(shape)?;
    let m = config.cop_count();
    if m >= shape.n() {
        return Err(Error::EvaderInapplicable(format!(
            "{m} cops on a {}-dimensional grid; evasion needs fewer than {}",
            shape.n(),
            shape.n()
        )));
    }
    if let Some(i) = config
        .cops
        .iter()
        .position(|c| manhattan_unchecked(c, &config.robber) % 2 == 0)
    {
        return Err(Error::EvaderInapplicable(format!(
            "cop {i} is at even distance from the robber"
        )));
    }

    let mut best: Option<(u64, Jump)> = None;
    for jump in neighbor_jumps(&config.robber, shape) {
        let to = jump.apply_unchecked(&config.robber);
        if config.cops.contains(&to) {
            continue;
        }
        if mode == EvaderMode::FirstSafe {
            return Ok(jump);
        }
        let nearest = config
            .cops
            .iter()
            .map(|c| manhattan_unchecked(c, &to))
            .min()
            .unwrap_or(u64::MAX);
        if best.is_none_or(|(d, _)| nearest > d) {
            best = Some((nearest, jump));
        }
    }
    best.map(|(_, j)| j).ok_or_else(|| {
        Error::InternalConsistency(format!("no unoccupied neighbor in {config}"))
    })
}

pub fn scripted_next(script: &[Jump], tick: u64) -> Result<Jump> {
    usize::try_from(tick)
        .ok()
        .and_then(|t| script.get(t))
        .copied()
        .ok_or(Error::ScriptExhausted {
            tick,
            len: script.len(),
        })
}

/// Reads one jump per line; blank lines and `#` comments are skipped.
pub fn parse_script(text: &str) -> Result<Vec<Jump>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone)]
pub struct GreedyRobber {
    metric: GreedyMetric,
    tie: GreedyTie,
    rng: Option<GameRng>,
}

impl GreedyRobber {
    pub fn new(metric: GreedyMetric, tie: GreedyTie) -> Self {
        let rng = match tie {
            GreedyTie::NeighborOrder => None,
            GreedyTie::Random { seed } => Some(rng_from_seed(seed)),
        };
        Self { metric, tie, rng }
    }
}

impl RobberStrategy for GreedyRobber {
    fn name(&self) -> String {
        RobberStrategySpec::Greedy {
            metric: self.metric,
            tie: self.tie,
        }
        .to_string()
    }

    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<Jump> {
        greedy_next(self.metric, config, shape, self.rng.as_mut())
    }
}

#[derive(Debug, Clone)]
pub struct ParityEvader {
    mode: EvaderMode,
}

impl ParityEvader {
    pub fn new(mode: EvaderMode) -> Self {
        Self { mode }
    }
}

impl RobberStrategy for ParityEvader {
    fn name(&self) -> String {
        RobberStrategySpec::ParityEvader { mode: self.mode }.to_string()
    }

    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<Jump> {
        parity_evader_next(config, shape, self.mode)
    }
}

#[derive(Debug, Clone)]
pub struct ScriptedRobber {
    script: Vec<Jump>,
    label: String,
}

impl ScriptedRobber {
    pub fn new(script: Vec<Jump>) -> Self {
        Self {
            script,
            label: "scripted".into(),
        }
    }

    pub fn with_label(script: Vec<Jump>, label: impl Into<String>) -> Self {
        Self {
            script,
            label: label.into(),
        }
    }
}

impl RobberStrategy for ScriptedRobber {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn next_jump(&mut self, _config: &Configuration, _shape: &GridShape, tick: u64) -> Result<Jump> {
        scripted_next(&self.script, tick)
    }
}

#[derive(Debug, Clone)]
pub struct RandomRobber {
    seed: u64,
    rng: GameRng,
}

impl RandomRobber {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: rng_from_seed(seed),
        }
    }
}

impl RobberStrategy for RandomRobber {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<Jump> {
        let options: Vec<Jump> = neighbor_jumps(&config.robber, shape).collect();
        Ok(options[self.rng.random_range(0..options.len())])
    }
}

/// Delegates every decision to a caller-supplied callback, typically a
/// terminal prompt. The callback returns [`Error::Aborted`] to quit.
pub struct InteractiveRobber<F> {
    ask: F,
}

impl<F> InteractiveRobber<F>
where
    F: FnMut(&Configuration, &GridShape, u64) -> Result<Jump>,
{
    pub fn new(ask: F) -> Self {
        Self { ask }
    }
}

impl<F> RobberStrategy for InteractiveRobber<F>
where
    F: FnMut(&Configuration, &GridShape, u64) -> Result<Jump>,
{
    fn name(&self) -> String {
        "interactive".into()
    }

    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, tick: u64) -> Result<Jump> {
        (self.ask)(config, shape, tick)
    }
}

/// A named robber strategy: `evader`, `evader:first-safe`, `greedy1`..`greedy3`
/// (optionally `:random-tie:<seed>`), `scripted:<file>`, `random[:<seed>]`
/// or `interactive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobberStrategySpec {
    ParityEvader { mode: EvaderMode },
    Greedy { metric: GreedyMetric, tie: GreedyTie },
    Scripted { jumps: Vec<Jump>, source: String },
    Random { seed: u64 },
    Interactive,
}

impl RobberStrategySpec {
    pub fn greedy(number: u8) -> Self {
        let metric = match number {
            1 => GreedyMetric::SumSquaredEuclidean,
            2 => GreedyMetric::SumManhattan,
            _ => GreedyMetric::SumEuclidean,
        };
        RobberStrategySpec::Greedy {
            metric,
            tie: GreedyTie::NeighborOrder,
        }
    }

    pub fn build(&self, _shape: &GridShape, stream: u64) -> Result<Box<dyn RobberStrategy>> {
        Ok(match self {
            RobberStrategySpec::ParityEvader { mode } => Box::new(ParityEvader::new(*mode)),
            RobberStrategySpec::Greedy { metric, tie } => Box::new(GreedyRobber::new(
                *metric,
                match *tie {
                    GreedyTie::NeighborOrder => GreedyTie::NeighborOrder,
                    GreedyTie::Random { seed } => GreedyTie::Random {
                        seed: derive_trial_seed(seed, stream),
                    },
                },
            )),
            RobberStrategySpec::Scripted { jumps, .. } => {
                Box::new(ScriptedRobber::with_label(jumps.clone(), self.to_string()))
            }
            RobberStrategySpec::Random { seed } => Box::new(RandomRobber::new(derive_trial_seed(*seed, stream))),
            RobberStrategySpec::Interactive => {
                return Err(Error::Strategy(
                    "the interactive robber needs a terminal and is only available in play mode".into(),
                ))
            }
        })
    }

    pub fn from_script_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(RobberStrategySpec::Scripted {
            jumps: parse_script(&text)?,
            source: path.display().to_string(),
        })
    }
}

impl fmt::Display for RobberStrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobberStrategySpec::ParityEvader { mode: EvaderMode::MaxMin } => f.write_str("evader"),
            RobberStrategySpec::ParityEvader {
                mode: EvaderMode::FirstSafe,
            } => f.write_str("evader:first-safe"),
            RobberStrategySpec::Greedy { metric, tie } => {
                write!(f, "greedy{}", metric.number())?;
                if let GreedyTie::Random { seed } = tie {
                    write!(f, ":random-tie:{seed}")?;
                }
                Ok(())
            }
            RobberStrategySpec::Scripted { source, .. } => write!(f, "scripted:{source}"),
            RobberStrategySpec::Random { seed } => write!(f, "random:{seed}"),
            RobberStrategySpec::Interactive => f.write_str("interactive"),
        }
    }
}

impl FromStr for RobberStrategySpec {
    type Err = Error;

    /// `scripted:<file>` reads the script file.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(path) = t.strip_prefix("scripted:") {
            return RobberStrategySpec::from_script_file(Path::new(path));
        }
        let parts: Vec<&str> = t.split(':').collect();
        let bad = |reason: &str| Error::parse("robber strategy", s, reason);
        let seed = |x: &str| x.parse::<u64>().map_err(|e| bad(&e.to_string()));
        let greedy = |g: &str| match g {
            "greedy1" => Some(GreedyMetric::SumSquaredEuclidean),
            "greedy2" => Some(GreedyMetric::SumManhattan),
            "greedy3" => Some(GreedyMetric::SumEuclidean),
            _ => None,
        };
        match parts.as_slice() {
            ["evader"] => Ok(RobberStrategySpec::ParityEvader { mode: EvaderMode::MaxMin }),
            ["evader", "first-safe"] => Ok(RobberStrategySpec::ParityEvader {
                mode: EvaderMode::FirstSafe,
            }),
            [g] if greedy(g).is_some() => Ok(RobberStrategySpec::Greedy {
                metric: greedy(g).unwrap(),
                tie: GreedyTie::NeighborOrder,
            }),
            [g, "random-tie", x] if greedy(g).is_some() => Ok(RobberStrategySpec::Greedy {
                metric: greedy(g).unwrap(),
                tie: GreedyTie::Random { seed: seed(x)? },
            }),
            ["random"] => Ok(RobberStrategySpec::Random { seed: 0 }),
            ["random", x] => Ok(RobberStrategySpec::Random { seed: seed(x)? }),
            ["interactive"] => Ok(RobberStrategySpec::Interactive),
            _ => Err(bad(
                "expected evader, greedy1|2|3, scripted:<file>, random[:<seed>] or interactive",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p<const N: usize>(c: [i64; N]) -> Position {
        c.into()
    }

    fn g(s: &str) -> GridShape {
        s.parse().unwrap()
    }

    #[test]
    fn greedy_manhattan_four_way_tie_takes_first_neighbor() {
        // Every candidate scores 8; (0,1) is first in neighbor order.
        let c = Configuration::new(vec![p([0, 0]), p([4, 4])], p([1, 1]));
        let j = greedy_next(GreedyMetric::SumManhattan, &c, &g("5x5"), None).unwrap();
        assert_eq!(j.apply_unchecked(&c.robber), p([0, 1]));
    }

    #[test]
    fn greedy_squared_tie_between_far_neighbors() {
        // Scores: (0,1)=1, (2,1)=5, (1,0)=1, (1,2)=5.
        let c = Configuration::new(vec![p([0, 0])], p([1, 1]));
        let j = greedy_next(GreedyMetric::SumSquaredEuclidean, &c, &g("3x3"), None).unwrap();
        assert_eq!(j.apply_unchecked(&c.robber), p([2, 1]));
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let j = greedy_next(GreedyMetric::SumSquaredEuclidean, &c, &g("3x3"), Some(&mut rng)).unwrap();
            let to = j.apply_unchecked(&c.robber);
            assert!(to == p([2, 1]) || to == p([1, 2]));
        }
    }

    #[test]
    fn greedy_euclidean_prefers_distance_sum() {
        // From (1,1) with cops (0,0),(0,2): (2,1) gives 2*sqrt(5), the best.
        let c = Configuration::new(vec![p([0, 0]), p([0, 2])], p([1, 1]));
        let j = greedy_next(GreedyMetric::SumEuclidean, &c, &g("3x3"), None).unwrap();
        assert_eq!(j.apply_unchecked(&c.robber), p([2, 1]));
    }

    #[test]
    fn greedy_in_corner_considers_n_candidates() {
        let c = Configuration::new(vec![p([2, 2])], p([0, 0]));
        let j = greedy_next(GreedyMetric::SumManhattan, &c, &g("3x3"), None).unwrap();
        assert!(j.apply(&c.robber, &g("3x3")).is_ok());
    }

    #[test]
    fn evader_example() {
        let c = Configuration::new(vec![p([0, 0])], p([1, 0]));
        let j = parity_evader_next(&c, &g("3x3"), EvaderMode::MaxMin).unwrap();
        assert_eq!(j.apply_unchecked(&c.robber), p([2, 0]));
        let j = parity_evader_next(&c, &g("3x3"), EvaderMode::FirstSafe).unwrap();
        assert_eq!(j.apply_unchecked(&c.robber), p([2, 0]));
    }

    #[test]
    fn evader_preconditions() {
        let two = Configuration::new(vec![p([0, 0]), p([2, 1])], p([1, 0]));
        assert!(matches!(
            parity_evader_next(&two, &g("3x3"), EvaderMode::MaxMin),
            Err(Error::EvaderInapplicable(_))
        ));
        let even = Configuration::new(vec![p([0, 0])], p([1, 1]));
        let err = parity_evader_next(&even, &g("3x3"), EvaderMode::MaxMin).unwrap_err();
        assert!(err.to_string().contains("cop 0"));
    }

    #[test]
    fn script_examples() {
        assert_eq!(scripted_next(&[Jump::plus(0)], 0).unwrap(), Jump::plus(0));
        let three = [Jump::plus(0), Jump::plus(1), Jump::minus(0)];
        assert!(matches!(scripted_next(&three, 3), Err(Error::ScriptExhausted { .. })));
        assert!(scripted_next(&[], 0).is_err());
        assert_eq!(
            parse_script("# moves\n0:+1\n\n1-  # short form\n").unwrap(),
            vec![Jump::plus(0), Jump::minus(1)]
        );
    }

    #[test]
    fn spec_names_roundtrip() {
        for name in ["evader", "evader:first-safe", "greedy1", "greedy2", "greedy3", "greedy3:random-tie:4", "random:9", "interactive"] {
            let spec: RobberStrategySpec = name.parse().unwrap();
            assert_eq!(spec.to_string(), name);
        }
        assert!("greedy4".parse::<RobberStrategySpec>().is_err());
        assert!("scripted:/definitely/not/here".parse::<RobberStrategySpec>().is_err());
        assert!(RobberStrategySpec::Interactive.build(&g("3x3"), 0).is_err());
    }
}

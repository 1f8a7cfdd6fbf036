//! Cop strategies.
//!
//! [`AlgorithmOne`] is the cyclic axis-matching strategy: cop `i` scans the
//! axes in the order `i, i+1, ..., i+n-1 (mod n)` and closes the gap on the
//! first axis where it differs from the robber. `n` such cops, one per
//! offset, capture any robber within `n * sum d_i` robber jumps.
//!
//! [`AlgorithmTwo`] is the single-cop strategy for two-dimensional grids:
//! close the larger of the two coordinate gaps. It wins whenever the initial
//! Manhattan distance is even.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::engine::{CopMove, CopStrategy};
use crate::error::{Error, Result};
use crate::grid::{cyclic, neighbor_jumps, Configuration, Direction, GridShape, Jump, Position};
use crate::seed::{derive_trial_seed, rng_from_seed, GameRng};

/// One move of the cyclic axis-matching strategy for the cop with offset `index`.
pub fn algorithm_one_next(index: usize, cop: &Position, robber_new: &Position, shape: &GridShape) -> CopMove {
    let n = shape.n();
    for j in 0..n {
        let axis = cyclic(index, j, n);
        let (c, r) = (cop.coord(axis), robber_new.coord(axis));
        if c != r {
            return CopMove::Jump(Jump::new(axis, Direction::toward(c, r)));
        }
    }
    CopMove::AlreadyCaptured
}

/// How the two-dimensional strategy breaks an exact tie between its gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TieRule {
    /// Axis 0 toward the robber. Tied gaps are non-zero, so axis 0 always differs.
    Deterministic,
    /// Any in-bounds neighbor, uniformly, from a seeded stream.
    Random { seed: u64 },
}

/// One move of the two-dimensional single-cop strategy.
///
/// `tie_rng` is consulted only on a tie and only when supplied; without it
/// the deterministic rule applies.
pub fn algorithm_two_next(
    cop: &Position,
    robber_new: &Position,
    shape: &GridShape,
    tie_rng: Option<&mut GameRng>,
) -> Result<CopMove> {
    if shape.n() != 2 {
        return Err(Error::Strategy(format!(
            "the two-dimensional strategy cannot run on {shape}"
        )));
    }
    let g0 = cop.coord(0).abs_diff(robber_new.coord(0));
    let g1 = cop.coord(1).abs_diff(robber_new.coord(1));
    let toward = |axis: usize| Jump::new(axis, Direction::toward(cop.coord(axis), robber_new.coord(axis)));
    let mv = if g0 > g1 {
        toward(0)
    } else if g0 < g1 {
        toward(1)
    } else if g0 == 0 {
        return Ok(CopMove::AlreadyCaptured);
    } else if let Some(rng) = tie_rng {
        let options: Vec<Jump> = neighbor_jumps(cop, shape).collect();
        options[rng.random_range(0..options.len())]
    } else {
        // Equal non-zero gaps, so axis 0 differs.
        toward(0)
    };
    Ok(CopMove::Jump(mv))
}

#[derive(Debug, Clone)]
pub struct AlgorithmOne {
    index: usize,
}

impl AlgorithmOne {
    pub fn new(index: usize) -> Self {
        Self { index }
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

impl CopStrategy for AlgorithmOne {
    fn name(&self) -> String {
        format!("alg1:{}", self.index)
    }

    fn next_move(&mut self, me: usize, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<CopMove> {
        Ok(algorithm_one_next(self.index, &config.cops[me], &config.robber, shape))
    }

    fn is_local(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone)]
pub struct AlgorithmTwo {
    tie: TieRule,
    rng: Option<GameRng>,
}

impl AlgorithmTwo {
    pub fn new(tie: TieRule) -> Self {
        let rng = match tie {
            TieRule::Deterministic => None,
            TieRule::Random { seed } => Some(rng_from_seed(seed)),
        };
        Self { tie, rng }
    }
}

impl CopStrategy for AlgorithmTwo {
    fn name(&self) -> String {
        CopStrategySpec::AlgorithmTwo { tie: self.tie }.to_string()
    }

    fn next_move(&mut self, me: usize, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<CopMove> {
        algorithm_two_next(&config.cops[me], &config.robber, shape, self.rng.as_mut())
    }

    fn is_deterministic(&self) -> bool {
        self.rng.is_none()
    }

    fn is_local(&self) -> bool {
        true
    }
}

/// Moves to a uniformly random neighbor every tick.
#[derive(Debug, Clone)]
pub struct RandomCop {
    seed: u64,
    rng: GameRng,
}

impl RandomCop {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: rng_from_seed(seed),
        }
    }
}

impl CopStrategy for RandomCop {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_move(&mut self, me: usize, config: &Configuration, shape: &GridShape, _tick: u64) -> Result<CopMove> {
        let cop = &config.cops[me];
        if *cop == config.robber {
            return Ok(CopMove::AlreadyCaptured);
        }
        let options: Vec<Jump> = neighbor_jumps(cop, shape).collect();
        Ok(CopMove::Jump(options[self.rng.random_range(0..options.len())]))
    }

    fn is_deterministic(&self) -> bool {
        false
    }
}

/// A named cop strategy: `alg1:<i>`, `alg2s`, `alg2s:random-tie:<seed>` or `random:<seed>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CopStrategySpec {
    AlgorithmOne { index: usize },
    AlgorithmTwo { tie: TieRule },
    Random { seed: u64 },
}

impl CopStrategySpec {
    pub fn validate(&self, shape: &GridShape) -> Result<()> {
        match *self {
            CopStrategySpec::AlgorithmOne { index } if index >= shape.n() => Err(Error::Strategy(format!(
                "alg1 index {index} out of range for {} axes",
                shape.n()
            ))),
            CopStrategySpec::AlgorithmTwo { .. } if shape.n() != 2 => {
                Err(Error::Strategy(format!("alg2s needs a two-dimensional grid, got {shape}")))
            }
            _ => Ok(()),
        }
    }

    /// Instantiates the strategy. Seeded variants mix `stream` into their
    /// seed so that independent games draw independent streams.
    pub fn build(&self, shape: &GridShape, stream: u64) -> Result<Box<dyn CopStrategy>> {
        self.validate(shape)?;
        Ok(match *self {
            CopStrategySpec::AlgorithmOne { index } => Box::new(AlgorithmOne::new(index)),
            CopStrategySpec::AlgorithmTwo { tie } => Box::new(AlgorithmTwo::new(match tie {
                TieRule::Deterministic => TieRule::Deterministic,
                TieRule::Random { seed } => TieRule::Random {
                    seed: derive_trial_seed(seed, stream),
                },
            })),
            CopStrategySpec::Random { seed } => Box::new(RandomCop::new(derive_trial_seed(seed, stream))),
        })
    }

    pub fn build_all(specs: &[CopStrategySpec], shape: &GridShape, stream: u64) -> Result<Vec<Box<dyn CopStrategy>>> {
        specs
            .iter()
            .enumerate()
            .map(|(i, s)| s.build(shape, stream.wrapping_add((i as u64) << 32)))
            .collect()
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(
            self,
            CopStrategySpec::AlgorithmOne { .. }
                | CopStrategySpec::AlgorithmTwo {
                    tie: TieRule::Deterministic
                }
        )
    }

    /// `alg1:0, ..., alg1:{n-1}`.
    pub fn full_algorithm_one_set(shape: &GridShape) -> Vec<CopStrategySpec> {
        (0..shape.n())
            .map(|index| CopStrategySpec::AlgorithmOne { index })
            .collect()
    }

    pub fn parse_list(s: &str) -> Result<Vec<CopStrategySpec>> {
        s.split(',').map(str::parse).collect()
    }
}

/// True when `specs` is exactly one cyclic-strategy cop per axis.
pub fn is_full_algorithm_one_set(specs: &[CopStrategySpec], shape: &GridShape) -> bool {
    let mut seen = vec![false; shape.n()];
    specs.len() == shape.n()
        && specs.iter().all(|s| match *s {
            CopStrategySpec::AlgorithmOne { index } if index < seen.len() && !seen[index] => {
                seen[index] = true;
                true
            }
            _ => false,
        })
}

/// Tick cap used when none is given: the capture bound plus 8 for a full
/// cyclic-strategy cop set, `10 * sum d_i` otherwise.
pub fn default_tick_cap(shape: &GridShape, specs: &[CopStrategySpec]) -> u64 {
    if is_full_algorithm_one_set(specs, shape) {
        crate::engine::capture_bound(shape) + 8
    } else {
        10 * shape.side_sum()
    }
}

impl fmt::Display for CopStrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopStrategySpec::AlgorithmOne { index } => write!(f, "alg1:{index}"),
            CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Deterministic,
            } => f.write_str("alg2s"),
            CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Random { seed },
            } => write!(f, "alg2s:random-tie:{seed}"),
            CopStrategySpec::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for CopStrategySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let parts: Vec<&str> = t.split(':').collect();
        let bad = |reason: &str| Error::parse("cop strategy", s, reason);
        let seed = |x: &str| x.parse::<u64>().map_err(|e| bad(&e.to_string()));
        match parts.as_slice() {
            ["alg1", i] => Ok(CopStrategySpec::AlgorithmOne {
                index: i.parse().map_err(|_| bad("alg1 index must be a non-negative integer"))?,
            }),
            ["alg2s"] => Ok(CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Deterministic,
            }),
            ["alg2s", "random-tie", x] => Ok(CopStrategySpec::AlgorithmTwo {
                tie: TieRule::Random { seed: seed(x)? },
            }),
            ["random"] => Ok(CopStrategySpec::Random { seed: 0 }),
            ["random", x] => Ok(CopStrategySpec::Random { seed: seed(x)? }),
            _ => Err(bad("expected alg1:<i>, alg2s[:random-tie:<seed>] or random[:<seed>]")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p<const N: usize>(c: [i64; N]) -> Position {
        c.into()
    }

    #[test]
    fn algorithm_one_examples() {
        let g2: GridShape = "10x10".parse().unwrap();
        assert_eq!(
            algorithm_one_next(0, &p([5, 5]), &p([5, 2]), &g2),
            CopMove::Jump(Jump::minus(1))
        );
        let g3: GridShape = "5x5x5".parse().unwrap();
        assert_eq!(
            algorithm_one_next(1, &p([0, 4, 0]), &p([0, 4, 2]), &g3),
            CopMove::Jump(Jump::plus(2))
        );
        // Offset 2 scans axis 2 first, then wraps to axis 0.
        assert_eq!(
            algorithm_one_next(2, &p([0, 4, 0]), &p([3, 4, 0]), &g3),
            CopMove::Jump(Jump::plus(0))
        );
        assert_eq!(algorithm_one_next(0, &p([1, 1]), &p([1, 1]), &g2), CopMove::AlreadyCaptured);
    }

    #[test]
    fn algorithm_two_examples() {
        let g: GridShape = "6x6".parse().unwrap();
        assert_eq!(
            algorithm_two_next(&p([0, 0]), &p([3, 2]), &g, None).unwrap(),
            CopMove::Jump(Jump::plus(0))
        );
        assert_eq!(
            algorithm_two_next(&p([5, 1]), &p([5, 4]), &g, None).unwrap(),
            CopMove::Jump(Jump::plus(1))
        );
        assert_eq!(
            algorithm_two_next(&p([2, 2]), &p([2, 2]), &g, None).unwrap(),
            CopMove::AlreadyCaptured
        );
        // Tie: axis 0 toward the robber.
        assert_eq!(
            algorithm_two_next(&p([3, 3]), &p([1, 5]), &g, None).unwrap(),
            CopMove::Jump(Jump::minus(0))
        );
        let g3: GridShape = "3x3x3".parse().unwrap();
        assert!(algorithm_two_next(&p([0, 0, 0]), &p([1, 0, 0]), &g3, None).is_err());
    }

    #[test]
    fn random_tie_stays_in_bounds() {
        let g: GridShape = "4x4".parse().unwrap();
        let mut rng = rng_from_seed(9);
        for _ in 0..200 {
            match algorithm_two_next(&p([0, 0]), &p([2, 2]), &g, Some(&mut rng)).unwrap() {
                CopMove::Jump(j) => assert!(j.apply(&p([0, 0]), &g).is_ok()),
                CopMove::AlreadyCaptured => panic!("not captured"),
            }
        }
    }

    #[test]
    fn spec_names_roundtrip() {
        for name in ["alg1:0", "alg1:3", "alg2s", "alg2s:random-tie:17", "random:5"] {
            let spec: CopStrategySpec = name.parse().unwrap();
            assert_eq!(spec.to_string(), name);
        }
        assert!("alg1".parse::<CopStrategySpec>().is_err());
        assert!("alg1:-1".parse::<CopStrategySpec>().is_err());
        assert!("alg3".parse::<CopStrategySpec>().is_err());
    }

    #[test]
    fn spec_validation() {
        let g2: GridShape = "3x3".parse().unwrap();
        let g3: GridShape = "3x3x3".parse().unwrap();
        assert!(CopStrategySpec::AlgorithmOne { index: 2 }.build(&g2, 0).is_err());
        assert!(CopStrategySpec::AlgorithmOne { index: 2 }.build(&g3, 0).is_ok());
        let alg2 = CopStrategySpec::AlgorithmTwo {
            tie: TieRule::Deterministic,
        };
        assert!(alg2.build(&g3, 0).is_err());
        assert!(alg2.build(&g2, 0).unwrap().is_deterministic());
        assert!(!CopStrategySpec::Random { seed: 1 }.build(&g2, 0).unwrap().is_deterministic());
    }

    #[test]
    fn tick_caps() {
        let g: GridShape = "3x3".parse().unwrap();
        let full = CopStrategySpec::full_algorithm_one_set(&g);
        assert_eq!(default_tick_cap(&g, &full), 20);
        let dup = vec![CopStrategySpec::AlgorithmOne { index: 0 }; 2];
        assert!(!is_full_algorithm_one_set(&dup, &g));
        assert_eq!(default_tick_cap(&g, &dup), 60);
    }
}

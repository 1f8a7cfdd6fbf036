//! Cops-and-robber pursuit on n-dimensional grids.
//!
//! The crate provides the grid model, a deterministic game engine, cop and
//! robber strategies, an adversarial survival oracle, claim checkers and a
//! parallel experiment runner with reproducible seeding.

#![forbid(unsafe_code)]

pub mod cops;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod robbers;
pub mod seed;
pub mod verification;

pub use cops::{AlgorithmOne, AlgorithmTwo, CopStrategySpec, RandomCop, TieRule};
pub use engine::{
    capture_bound, is_favorable, run, step, Capture, CopMove, CopStrategy, GameTrace, HalfStep, Outcome,
    RobberStrategy, TickRecord, TraceMeta,
};
pub use error::{Agent, Error, Result};
pub use experiments::{run_experiment, simulate_game, ExperimentSpec, StatsSummary, TrialRecord};
pub use grid::{manhattan, neighbors, Configuration, Direction, GridShape, Jump, Position};
pub use robbers::{EvaderMode, GreedyMetric, GreedyTie, RobberStrategySpec};
pub use seed::derive_trial_seed;
pub use verification::{ClaimReport, Verdict};

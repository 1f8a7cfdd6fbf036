//! Fixtures shared by the benchmarks.

use gridchase_core::{Configuration, CopStrategySpec, ExperimentSpec, GridShape, RobberStrategySpec};

pub fn square(side: i64) -> GridShape {
    GridShape::new(vec![side, side]).expect("valid side")
}

/// Two cyclic cops in opposite corners, robber near the middle.
pub fn corner_start(shape: &GridShape) -> Configuration {
    let (w, h) = (shape.dim(0), shape.dim(1));
    Configuration::new(vec![[0, 0].into(), [w - 1, h - 1].into()], [w / 2, h / 2 + 1].into())
}

pub fn cyclic_experiment(side: i64, robber: u8, trials: u64) -> ExperimentSpec {
    let shape = square(side);
    let cops = CopStrategySpec::full_algorithm_one_set(&shape);
    let mut spec = ExperimentSpec::new(shape, cops, RobberStrategySpec::greedy(robber), trials, 1);
    spec.workers = 1;
    spec
}

//! The game loop: the robber jumps, then every cop jumps simultaneously.
//!
//! Termination is checked after each half-step. Jumps are mandatory for
//! every agent on every tick, and several agents may share a node.

use crate::error::{Agent, Error, Result};
use crate::grid::{cyclic, manhattan_unchecked, Configuration, GridShape, Jump, Position};

pub mod trace;

pub use trace::{GameTrace, TraceMeta};

/// What a cop strategy asks for on its turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopMove {
    Jump(Jump),
    /// The cop already shares the robber's node.
    AlreadyCaptured,
}

pub trait CopStrategy {
    fn name(&self) -> String;

    /// `config` carries the pre-batch cop positions and the robber's node
    /// after its latest jump. `me` is this cop's slot in `config.cops`.
    fn next_move(
        &mut self,
        me: usize,
        config: &Configuration,
        shape: &GridShape,
        tick: u64,
    ) -> Result<CopMove>;

    /// Deterministic, memoryless strategies are functions of the
    /// configuration alone; the adversarial oracle relies on that.
    fn is_deterministic(&self) -> bool {
        true
    }

    /// The move depends only on this cop's node and the robber's node, so
    /// it can be tabulated per node pair.
    fn is_local(&self) -> bool {
        false
    }
}

pub trait RobberStrategy {
    fn name(&self) -> String;

    /// `config` is the full-tick configuration: both sides have made `tick` jumps.
    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, tick: u64) -> Result<Jump>;
}

impl<T: CopStrategy + ?Sized> CopStrategy for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn next_move(
        &mut self,
        me: usize,
        config: &Configuration,
        shape: &GridShape,
        tick: u64,
    ) -> Result<CopMove> {
        (**self).next_move(me, config, shape, tick)
    }
    fn is_deterministic(&self) -> bool {
        (**self).is_deterministic()
    }
    fn is_local(&self) -> bool {
        (**self).is_local()
    }
}

impl<T: RobberStrategy + ?Sized> RobberStrategy for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn next_jump(&mut self, config: &Configuration, shape: &GridShape, tick: u64) -> Result<Jump> {
        (**self).next_jump(config, shape, tick)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfStep {
    /// The initial configuration was already terminating.
    Initial,
    /// The robber jumped onto a cop.
    Robber,
    /// A cop jumped onto the robber.
    Cop,
}

impl HalfStep {
    pub fn as_str(self) -> &'static str {
        match self {
            HalfStep::Initial => "initial",
            HalfStep::Robber => "robber",
            HalfStep::Cop => "cop",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capture {
    pub half_step: HalfStep,
    pub cop: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TickRecord {
    /// Robber jumps completed before this tick.
    pub tick: u64,
    pub robber_jump: Jump,
    /// One entry per cop; all `None` when the robber half-step captured.
    pub cop_jumps: Vec<Option<Jump>>,
    pub after_robber: Configuration,
    /// `None` when the game ended at the robber half-step.
    pub after_cops: Option<Configuration>,
    pub capture: Option<Capture>,
}

impl TickRecord {
    /// The configuration the tick ends in.
    pub fn end(&self) -> &Configuration {
        self.after_cops.as_ref().unwrap_or(&self.after_robber)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Captured {
        robber_jumps: u64,
        cop: usize,
        half_step: HalfStep,
    },
    Evaded {
        tick_cap: u64,
    },
}

impl Outcome {
    pub fn is_captured(&self) -> bool {
        matches!(self, Outcome::Captured { .. })
    }
}

pub fn terminating(c: &Configuration) -> bool {
    c.capturing_cop().is_some()
}

/// Cop `offset`'s favorability test on raw positions.
///
/// `offset` selects the cyclic axis order `offset, offset+1, ...` (mod n)
/// in which the cop's matched prefix is measured; the jump is favorable iff
/// its axis is outside that prefix.
pub fn is_favorable_at(offset: usize, cop: &Position, robber: &Position, robber_jump: Jump) -> bool {
    let n = robber.n();
    let mut j = 0;
    while j < n {
        let axis = cyclic(offset, j, n);
        if cop.coord(axis) != robber.coord(axis) {
            break;
        }
        j += 1;
    }
    !(0..j).any(|k| cyclic(offset, k, n) == robber_jump.axis)
}

/// Whether `robber_jump`, played from `config_before`, is favorable to cop
/// `cop_index`. The cop's axis offset is its index modulo `n`.
pub fn is_favorable(
    cop_index: usize,
    config_before: &Configuration,
    robber_jump: Jump,
    shape: &GridShape,
) -> Result<bool> {
    config_before.validate(shape)?;
    let cop = config_before.cops.get(cop_index).ok_or_else(|| {
        Error::Strategy(format!(
            "cop index {cop_index} out of range for {} cops",
            config_before.cop_count()
        ))
    })?;
    if *cop == config_before.robber {
        return Err(Error::AlreadyTerminated(cop_index));
    }
    Ok(is_favorable_at(
        cop_index % shape.n(),
        cop,
        &config_before.robber,
        robber_jump,
    ))
}

/// `n * sum_i d_i`: robber jumps within which `n` cops running the
/// cyclic axis-matching strategies always capture.
pub fn capture_bound(shape: &GridShape) -> u64 {
    shape.n() as u64 * shape.side_sum()
}

fn checked_jump(agent: Agent, jump: Jump, from: &Position, shape: &GridShape) -> Result<Position> {
    if jump.axis >= shape.n() {
        return Err(Error::IllegalMove {
            agent,
            reason: format!("axis {} does not exist in {shape}", jump.axis),
        });
    }
    let to = jump.apply_unchecked(from);
    if !shape.contains(&to) {
        return Err(Error::IllegalMove {
            agent,
            reason: format!("jump {jump} from {from} leaves {shape}"),
        });
    }
    Ok(to)
}

/// Plays one tick from a non-terminating full-tick configuration.
pub fn step<C: CopStrategy>(
    shape: &GridShape,
    state: &Configuration,
    robber: &mut dyn RobberStrategy,
    cops: &mut [C],
    tick: u64,
) -> Result<TickRecord> {
    if cops.len() != state.cop_count() {
        return Err(Error::Strategy(format!(
            "{} cop strategies for {} cops",
            cops.len(),
            state.cop_count()
        )));
    }
    if let Some(i) = state.capturing_cop() {
        return Err(Error::AlreadyTerminated(i));
    }

    let robber_jump = robber.next_jump(state, shape, tick)?;
    let robber_to = checked_jump(Agent::Robber, robber_jump, &state.robber, shape)?;
    let after_robber = Configuration::new(state.cops.clone(), robber_to);

    if let Some(cop) = after_robber.capturing_cop() {
        return Ok(TickRecord {
            tick,
            robber_jump,
            cop_jumps: vec![None; cops.len()],
            after_robber,
            after_cops: None,
            capture: Some(Capture {
                half_step: HalfStep::Robber,
                cop,
            }),
        });
    }

    // Every cop decides against the same post-robber configuration.
    let mut cop_jumps = Vec::with_capacity(cops.len());
    for (i, strategy) in cops.iter_mut().enumerate() {
        match strategy.next_move(i, &after_robber, shape, tick)? {
            CopMove::Jump(j) => cop_jumps.push(j),
            CopMove::AlreadyCaptured => {
                return Err(Error::InternalConsistency(format!(
                    "cop {i} reported a capture the engine did not see at tick {tick}"
                )))
            }
        }
    }
    let new_cops = cop_jumps
        .iter()
        .zip(&after_robber.cops)
        .enumerate()
        .map(|(i, (&j, from))| checked_jump(Agent::Cop(i), j, from, shape))
        .collect::<Result<Vec<_>>>()?;
    let after_cops = Configuration::new(new_cops, after_robber.robber.clone());
    let capture = after_cops.capturing_cop().map(|cop| Capture {
        half_step: HalfStep::Cop,
        cop,
    });

    Ok(TickRecord {
        tick,
        robber_jump,
        cop_jumps: cop_jumps.into_iter().map(Some).collect(),
        after_robber,
        after_cops: Some(after_cops),
        capture,
    })
}

/// Runs a game until capture or until `tick_cap` robber jumps have elapsed.
pub fn run<C: CopStrategy>(
    shape: &GridShape,
    initial: &Configuration,
    robber: &mut dyn RobberStrategy,
    cops: &mut [C],
    tick_cap: u64,
) -> Result<GameTrace> {
    initial.validate(shape)?;
    if tick_cap == 0 {
        return Err(Error::Strategy("tick cap must be positive".into()));
    }
    if cops.len() != initial.cop_count() {
        return Err(Error::Strategy(format!(
            "{} cop strategies for {} cops",
            cops.len(),
            initial.cop_count()
        )));
    }
    let meta = TraceMeta {
        robber: robber.name(),
        cops: cops.iter().map(|c| c.name()).collect(),
        seed: None,
    };
    let mut records = Vec::new();

    let outcome = if let Some(cop) = initial.capturing_cop() {
        Outcome::Captured {
            robber_jumps: 0,
            cop,
            half_step: HalfStep::Initial,
        }
    } else {
        let mut state = initial.clone();
        let mut outcome = Outcome::Evaded { tick_cap };
        for tick in 0..tick_cap {
            let rec = step(shape, &state, robber, cops, tick)?;
            if let Some(c) = rec.capture {
                outcome = Outcome::Captured {
                    robber_jumps: tick + 1,
                    cop: c.cop,
                    half_step: c.half_step,
                };
                records.push(rec);
                break;
            }
            state = rec.end().clone();
            records.push(rec);
        }
        outcome
    };

    Ok(GameTrace {
        shape: shape.clone(),
        initial: initial.clone(),
        records,
        outcome,
        meta,
    })
}

/// Manhattan distance from every cop to the robber.
pub(crate) fn cop_distances(c: &Configuration) -> Vec<u64> {
    c.cops
        .iter()
        .map(|cop| manhattan_unchecked(cop, &c.robber))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cops::AlgorithmOne;
    use crate::robbers::ScriptedRobber;

    fn p<const N: usize>(c: [i64; N]) -> Position {
        c.into()
    }

    fn shape(s: &str) -> GridShape {
        s.parse().unwrap()
    }

    #[test]
    fn terminating_examples() {
        assert!(terminating(&Configuration::new(vec![p([1, 1])], p([1, 1]))));
        assert!(!terminating(&Configuration::new(vec![p([0, 0]), p([2, 2])], p([1, 1]))));
        assert!(terminating(&Configuration::new(vec![p([0, 0]), p([1, 1])], p([1, 1]))));
    }

    #[test]
    fn favorable_examples() {
        let g = shape("10x10");
        let c = Configuration::new(vec![p([2, 3])], p([2, 7]));
        assert!(is_favorable(0, &c, Jump::plus(1), &g).unwrap());
        assert!(!is_favorable(0, &c, Jump::plus(0), &g).unwrap());
        assert!(!is_favorable(0, &c, Jump::minus(0), &g).unwrap());

        // j_1 = 0 excludes nothing.
        let c = Configuration::new(vec![p([1, 3])], p([2, 3]));
        assert!(is_favorable(0, &c, Jump::plus(1), &g).unwrap());
        assert!(is_favorable(0, &c, Jump::minus(0), &g).unwrap());

        let caught = Configuration::new(vec![p([2, 3])], p([2, 3]));
        assert!(matches!(
            is_favorable(0, &caught, Jump::plus(0), &g),
            Err(Error::AlreadyTerminated(0))
        ));
    }

    #[test]
    fn axis_zero_jump_favors_cop_one() {
        let g = shape("5x5");
        for cop in g.positions() {
            for r in g.positions() {
                if cop == r {
                    continue;
                }
                let c = Configuration::new(vec![p([0, 0]), cop.clone()], r);
                assert!(is_favorable(1, &c, Jump::plus(0), &g).unwrap());
                assert!(is_favorable(1, &c, Jump::minus(0), &g).unwrap());
            }
        }
    }

    #[test]
    fn step_moves_cop_on_first_differing_axis() {
        let g = shape("3x3");
        let state = Configuration::new(vec![p([0, 0])], p([2, 2]));
        let mut robber = ScriptedRobber::new(vec![Jump::minus(1)]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let rec = step(&g, &state, &mut robber, &mut cops, 0).unwrap();
        assert_eq!(rec.after_robber.robber, p([2, 1]));
        assert_eq!(rec.cop_jumps, vec![Some(Jump::plus(0))]);
        assert_eq!(rec.after_cops.unwrap().cops, vec![p([1, 0])]);
        assert!(rec.capture.is_none());
    }

    #[test]
    fn robber_stepping_onto_cop_is_captured_immediately() {
        let g = shape("3x3");
        let state = Configuration::new(vec![p([1, 0])], p([2, 0]));
        let mut robber = ScriptedRobber::new(vec![Jump::minus(0)]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let rec = step(&g, &state, &mut robber, &mut cops, 0).unwrap();
        assert_eq!(
            rec.capture,
            Some(Capture {
                half_step: HalfStep::Robber,
                cop: 0
            })
        );
        assert_eq!(rec.cop_jumps, vec![None]);
        assert!(rec.after_cops.is_none());
    }

    #[test]
    fn cop_capture_at_cop_half_step() {
        let g = shape("3x3");
        let state = Configuration::new(vec![p([0, 0])], p([2, 0]));
        let mut robber = ScriptedRobber::new(vec![Jump::minus(0)]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let rec = step(&g, &state, &mut robber, &mut cops, 0).unwrap();
        assert_eq!(
            rec.capture,
            Some(Capture {
                half_step: HalfStep::Cop,
                cop: 0
            })
        );
    }

    #[test]
    fn out_of_bounds_robber_move_is_illegal() {
        let g = shape("3x3");
        let state = Configuration::new(vec![p([2, 2])], p([0, 0]));
        let mut robber = ScriptedRobber::new(vec![Jump::minus(0)]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let err = step(&g, &state, &mut robber, &mut cops, 0).unwrap_err();
        assert!(matches!(
            err,
            Error::IllegalMove {
                agent: Agent::Robber,
                ..
            }
        ));
    }

    #[test]
    fn step_rejects_terminating_state_and_count_mismatch() {
        let g = shape("3x3");
        let mut robber = ScriptedRobber::new(vec![Jump::plus(0)]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let caught = Configuration::new(vec![p([1, 1])], p([1, 1]));
        assert!(step(&g, &caught, &mut robber, &mut cops, 0).is_err());
        let two = Configuration::new(vec![p([0, 0]), p([2, 2])], p([1, 1]));
        assert!(step(&g, &two, &mut robber, &mut cops, 0).is_err());
    }

    #[test]
    fn run_initial_capture() {
        let g = shape("2x2");
        let init = Configuration::new(vec![p([0, 0])], p([0, 0]));
        let mut robber = ScriptedRobber::new(vec![]);
        let mut cops = vec![AlgorithmOne::new(0)];
        let t = run(&g, &init, &mut robber, &mut cops, 10).unwrap();
        assert_eq!(
            t.outcome,
            Outcome::Captured {
                robber_jumps: 0,
                cop: 0,
                half_step: HalfStep::Initial
            }
        );
        assert!(t.records.is_empty());
    }

    #[test]
    fn run_rejects_zero_cap() {
        let g = shape("2x2");
        let init = Configuration::new(vec![p([0, 0])], p([1, 1]));
        let mut robber = ScriptedRobber::new(vec![]);
        let mut cops = vec![AlgorithmOne::new(0)];
        assert!(run(&g, &init, &mut robber, &mut cops, 0).is_err());
    }
}

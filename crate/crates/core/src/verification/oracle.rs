//! Brute-force robber oracle against fixed deterministic cops.
//!
//! With memoryless deterministic cops the game tree branches only on robber
//! moves, and the longest survival from a full-tick configuration depends on
//! that configuration alone. The search is a depth-first traversal with a
//! memo table keyed by configuration. Meeting a configuration that is still
//! on the DFS stack means the robber can steer into a cycle, so every state
//! on the stack can survive forever.
//!
//! States are mixed-radix integers over node indices. Cops whose moves depend
//! only on their own node and the robber's node are tabulated up front.

use std::collections::HashMap;

use crate::engine::{CopMove, CopStrategy};
use crate::error::{Agent, Error, Result};
use crate::grid::{neighbor_jumps, Configuration, GridShape, Jump, Position};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Dense memo tables are used up to this many states.
const DENSE_LIMIT: u64 = 1 << 26;

/// Largest grid the oracle indexes.
const NODE_LIMIT: u64 = 1 << 22;

/// Per-cop response tables are built up to this many nodes.
const TABLE_NODE_LIMIT: u64 = 2048;

const UNSEEN: u32 = u32::MAX;
const ACTIVE: u32 = u32::MAX - 1;
const UNBOUNDED: u32 = u32::MAX - 2;

/// Table entry for a cop already on the robber's node.
const NO_MOVE: u32 = u32::MAX;

/// Longest robber survival, in robber jumps, from a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Survival {
    Finite(u64),
    Unbounded,
}

impl Survival {
    pub fn capped(self, horizon: u64) -> u64 {
        match self {
            Survival::Finite(v) => v.min(horizon),
            Survival::Unbounded => horizon,
        }
    }

    fn from_raw(v: u32) -> Self {
        if v == UNBOUNDED {
            Survival::Unbounded
        } else {
            Survival::Finite(v as u64)
        }
    }
}

enum Memo {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl Memo {
    fn get(&self, id: u64) -> u32 {
        match self {
            Memo::Dense(v) => v[id as usize],
            Memo::Sparse(m) => m.get(&id).copied().unwrap_or(UNSEEN),
        }
    }

    fn set(&mut self, id: u64, v: u32) {
        match self {
            Memo::Dense(t) => t[id as usize] = v,
            Memo::Sparse(m) => {
                m.insert(id, v);
            }
        }
    }
}

/// Result of one robber move from a full-tick state.
enum Next {
    Captured,
    State(u64),
}

struct Frame {
    id: u64,
    robber: u32,
    next: usize,
    best: u32,
}

pub struct SurvivalOracle<'a, C: CopStrategy> {
    shape: GridShape,
    cops: &'a mut [C],
    nodes: u64,
    positions: Vec<Position>,
    /// Robber jumps and target nodes per node, in neighbor order.
    moves: Vec<Vec<(Jump, u32)>>,
    /// Per cop, `cop_node * nodes + robber_node` to the cop's next node.
    tables: Option<Vec<Vec<u32>>>,
    memo: Memo,
    expanded: u64,
    budget: u64,
    before: Vec<u32>,
    after: Vec<u32>,
}

impl<'a, C: CopStrategy> SurvivalOracle<'a, C> {
    pub fn new(shape: &GridShape, cops: &'a mut [C], node_budget: u64) -> Result<Self> {
        if cops.is_empty() {
            return Err(Error::Strategy("the oracle needs at least one cop".into()));
        }
        if let Some(c) = cops.iter().find(|c| !c.is_deterministic()) {
            return Err(Error::Strategy(format!(
                "the oracle needs deterministic cops; {} is randomized",
                c.name()
            )));
        }
        let nodes = shape
            .node_count()
            .filter(|&n| n <= NODE_LIMIT)
            .ok_or_else(|| Error::OracleInfeasible(format!("{shape} is too large")))?;
        let states = (0..=cops.len()).try_fold(1u64, |acc, _| acc.checked_mul(nodes));
        let memo = match states {
            Some(s) if s <= DENSE_LIMIT => Memo::Dense(vec![UNSEEN; s as usize]),
            Some(_) => Memo::Sparse(HashMap::new()),
            None => {
                return Err(Error::OracleInfeasible(format!(
                    "{} agents on {shape} overflow the state index",
                    cops.len() + 1
                )))
            }
        };
        let positions: Vec<Position> = shape.positions().collect();
        let moves = positions
            .iter()
            .map(|p| {
                neighbor_jumps(p, shape)
                    .map(|j| (j, shape.node_index(&j.apply_unchecked(p)) as u32))
                    .collect()
            })
            .collect();
        let m = cops.len();
        let mut oracle = Self {
            shape: shape.clone(),
            cops,
            nodes,
            positions,
            moves,
            tables: None,
            memo,
            expanded: 0,
            budget: node_budget,
            before: Vec::with_capacity(m),
            after: Vec::with_capacity(m),
        };
        if nodes <= TABLE_NODE_LIMIT && oracle.cops.iter().all(|c| c.is_local()) {
            oracle.tables = Some(oracle.build_tables()?);
        }
        Ok(oracle)
    }

    fn build_tables(&mut self) -> Result<Vec<Vec<u32>>> {
        let n = self.nodes as usize;
        let m = self.cops.len();
        let mut tables = Vec::with_capacity(m);
        for i in 0..m {
            let mut table = vec![NO_MOVE; n * n];
            for c in 0..n {
                for r in 0..n {
                    if c != r {
                        let config = Configuration::new(vec![self.positions[c].clone(); m], self.positions[r].clone());
                        table[c * n + r] = self.respond_slow(i, &config)?;
                    }
                }
            }
            tables.push(table);
        }
        Ok(tables)
    }

    /// One cop's next node, asking the strategy directly.
    fn respond_slow(&mut self, i: usize, after_robber: &Configuration) -> Result<u32> {
        let from = &after_robber.cops[i];
        match self.cops[i].next_move(i, after_robber, &self.shape, 0)? {
            CopMove::Jump(j) => {
                let to = j.apply_unchecked(from);
                if !self.shape.contains(&to) {
                    return Err(Error::IllegalMove {
                        agent: Agent::Cop(i),
                        reason: format!("jump {j} from {from} leaves {}", self.shape),
                    });
                }
                Ok(self.shape.node_index(&to) as u32)
            }
            CopMove::AlreadyCaptured => Err(Error::InternalConsistency(format!(
                "cop {i} reported a capture the oracle did not see"
            ))),
        }
    }

    /// States expanded so far.
    pub fn expanded(&self) -> u64 {
        self.expanded
    }

    fn state_id(&self, c: &Configuration) -> u64 {
        let mut id = 0u64;
        for cop in c.cops.iter().rev() {
            id = id * self.nodes + self.shape.node_index(cop);
        }
        id * self.nodes + self.shape.node_index(&c.robber)
    }

    fn robber_of(&self, id: u64) -> u32 {
        (id % self.nodes) as u32
    }

    fn configuration(&self, id: u64) -> Configuration {
        let n = self.nodes;
        let mut rest = id / n;
        let cops = (0..self.cops.len())
            .map(|_| {
                let c = self.positions[(rest % n) as usize].clone();
                rest /= n;
                c
            })
            .collect();
        Configuration::new(cops, self.positions[(id % n) as usize].clone())
    }

    /// Plays robber move `k` from state `id` and the cops' answer.
    fn play(&mut self, id: u64, k: usize) -> Result<Next> {
        let n = self.nodes;
        let robber = self.moves[self.robber_of(id) as usize][k].1;
        let mut before = std::mem::take(&mut self.before);
        let mut after = std::mem::take(&mut self.after);
        before.clear();
        after.clear();
        let mut rest = id / n;
        for _ in 0..self.cops.len() {
            before.push((rest % n) as u32);
            rest /= n;
        }
        let result = self.answer(&before, robber, &mut after);
        let next = match result {
            Ok(()) if before.contains(&robber) || after.contains(&robber) => Ok(Next::Captured),
            Ok(()) => {
                let id = after.iter().rev().fold(0u64, |acc, &c| acc * n + c as u64);
                Ok(Next::State(id * n + robber as u64))
            }
            Err(e) => Err(e),
        };
        self.before = before;
        self.after = after;
        next
    }

    fn answer(&mut self, before: &[u32], robber: u32, after: &mut Vec<u32>) -> Result<()> {
        if before.contains(&robber) {
            return Ok(());
        }
        let n = self.nodes as usize;
        if let Some(tables) = &self.tables {
            after.extend(before.iter().zip(tables).map(|(&c, t)| t[c as usize * n + robber as usize]));
            return Ok(());
        }
        let config = Configuration::new(
            before.iter().map(|&c| self.positions[c as usize].clone()).collect(),
            self.positions[robber as usize].clone(),
        );
        for i in 0..before.len() {
            after.push(self.respond_slow(i, &config)?);
        }
        Ok(())
    }

    fn open(&mut self, id: u64) -> Result<Frame> {
        self.expanded += 1;
        if self.expanded > self.budget {
            return Err(Error::OracleInfeasible(format!(
                "node budget of {} exceeded on {}",
                self.budget, self.shape
            )));
        }
        self.memo.set(id, ACTIVE);
        Ok(Frame {
            id,
            robber: self.robber_of(id),
            next: 0,
            best: 0,
        })
    }

    fn check(&self, initial: &Configuration) -> Result<()> {
        initial.validate(&self.shape)?;
        if initial.cop_count() != self.cops.len() {
            return Err(Error::Strategy(format!(
                "{} cop strategies for {} cops",
                self.cops.len(),
                initial.cop_count()
            )));
        }
        Ok(())
    }

    /// Longest robber survival from a full-tick configuration.
    pub fn survival(&mut self, initial: &Configuration) -> Result<Survival> {
        self.check(initial)?;
        if initial.capturing_cop().is_some() {
            return Ok(Survival::Finite(0));
        }
        let root = self.state_id(initial);
        self.survival_of(root)
    }

    /// Survival from a non-terminating state.
    fn survival_of(&mut self, root: u64) -> Result<Survival> {
        match self.memo.get(root) {
            UNSEEN => {}
            ACTIVE => {
                return Err(Error::InternalConsistency(
                    "oracle memo left inconsistent by an earlier failed search".into(),
                ))
            }
            v => return Ok(Survival::from_raw(v)),
        }

        let mut stack = vec![self.open(root)?];
        while let Some(top) = stack.last_mut() {
            if top.best == UNBOUNDED || top.next == self.moves[top.robber as usize].len() {
                let done = stack.pop().expect("non-empty");
                self.memo.set(done.id, done.best);
                if let Some(parent) = stack.last_mut() {
                    parent.best = parent.best.max(extend(done.best));
                }
                continue;
            }
            let (id, k) = (top.id, top.next);
            top.next += 1;
            match self.play(id, k)? {
                Next::Captured => {
                    let top = stack.last_mut().expect("non-empty");
                    top.best = top.best.max(1);
                }
                Next::State(child) => match self.memo.get(child) {
                    UNSEEN => {
                        let frame = self.open(child)?;
                        stack.push(frame);
                    }
                    v => {
                        let top = stack.last_mut().expect("non-empty");
                        let value = if v == ACTIVE { UNBOUNDED } else { extend(v) };
                        top.best = top.best.max(value);
                    }
                },
            }
        }
        Ok(Survival::from_raw(self.memo.get(root)))
    }

    /// A robber line achieving the optimal survival from `initial`, cut at
    /// `max_len` jumps. Ties go to the first move in neighbor order.
    pub fn best_line(&mut self, initial: &Configuration, max_len: u64) -> Result<Vec<Jump>> {
        let mut line = Vec::new();
        let mut target = self.survival(initial)?;
        let mut state = self.state_id(initial);
        while (line.len() as u64) < max_len && target != Survival::Finite(0) {
            let robber = self.robber_of(state) as usize;
            let mut chosen = None;
            for k in 0..self.moves[robber].len() {
                let (value, next) = match self.play(state, k)? {
                    Next::Captured => (Survival::Finite(1), None),
                    Next::State(c) => {
                        let v = match self.survival_of(c)? {
                            Survival::Finite(v) => Survival::Finite(v + 1),
                            Survival::Unbounded => Survival::Unbounded,
                        };
                        (v, Some(c))
                    }
                };
                if value == target {
                    chosen = Some((self.moves[robber][k].0, next));
                    break;
                }
            }
            let (jump, next) = chosen.ok_or_else(|| {
                Error::InternalConsistency(format!(
                    "no robber move realizes {target:?} from {}",
                    self.configuration(state)
                ))
            })?;
            line.push(jump);
            match next {
                None => break,
                Some(c) => {
                    target = match target {
                        Survival::Finite(v) => Survival::Finite(v - 1),
                        Survival::Unbounded => Survival::Unbounded,
                    };
                    state = c;
                }
            }
        }
        Ok(line)
    }
}

fn extend(v: u32) -> u32 {
    if v == UNBOUNDED || v == ACTIVE {
        UNBOUNDED
    } else {
        (v + 1).min(UNBOUNDED - 1)
    }
}

/// Maximum robber survival, in robber jumps and capped at `horizon`,
/// against the given deterministic cops.
pub fn adversarial_survival<C: CopStrategy>(
    shape: &GridShape,
    cops: &mut [C],
    initial: &Configuration,
    horizon: u64,
    node_budget: u64,
) -> Result<u64> {
    let mut oracle = SurvivalOracle::new(shape, cops, node_budget)?;
    Ok(oracle.survival(initial)?.capped(horizon))
}

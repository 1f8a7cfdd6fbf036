//! Grid geometry: shapes, positions, jumps and configurations.
//!
//! A `d_0 x d_1 x ... x d_{n-1}` grid has nodes `(u_0, ..., u_{n-1})` with
//! `0 <= u_i < d_i`. Two nodes are adjacent iff exactly one coordinate
//! differs, and by exactly one. Textual forms used by files and the CLI:
//! shapes are `"10x10"`, `"3x3x3"`; positions are `"3,4,0"`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported side length.
pub const MAX_SIDE: i64 = 1 << 31;

/// `(a + b) mod n`, always in `[0, n)`.
pub fn wrap_index(a: i64, b: i64, n: i64) -> Result<usize> {
    if n <= 0 {
        return Err(Error::InvalidDimension(n));
    }
    Ok((a + b).rem_euclid(n) as usize)
}

/// Cyclic axis shift on an already-validated axis count.
#[inline]
pub(crate) fn cyclic(a: usize, b: usize, n: usize) -> usize {
    (a + b) % n
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridShape {
    dims: Vec<i64>,
}

impl GridShape {
    pub fn new(dims: Vec<i64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("a grid needs at least one axis".into()));
        }
        if let Some((axis, d)) = dims.iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(Error::InvalidShape(format!(
                "axis {axis} has size {d}; every side must be at least 2"
            )));
        }
        if let Some(d) = dims.iter().find(|&&d| d > MAX_SIDE) {
            return Err(Error::InvalidShape(format!("side {d} exceeds 2^31")));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[i64] {
        &self.dims
    }

    /// Number of axes.
    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, axis: usize) -> i64 {
        self.dims[axis]
    }

    /// `sum_i d_i`, the quantity every capture bound is expressed in.
    pub fn side_sum(&self) -> u64 {
        self.dims.iter().map(|&d| d as u64).sum()
    }

    /// Total node count, or `None` on overflow.
    pub fn node_count(&self) -> Option<u64> {
        self.dims
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
    }

    pub fn contains(&self, p: &Position) -> bool {
        p.coords.len() == self.n()
            && p.coords
                .iter()
                .zip(&self.dims)
                .all(|(&u, &d)| (0..d).contains(&u))
    }

    pub fn check(&self, p: &Position) -> Result<()> {
        if p.coords.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: p.coords.len(),
            });
        }
        if !self.contains(p) {
            return Err(Error::InvalidPosition(format!("{p} lies outside {self}")));
        }
        Ok(())
    }

    /// Row-major index with axis 0 varying fastest.
    pub fn node_index(&self, p: &Position) -> u64 {
        let mut idx = 0u64;
        for (&u, &d) in p.coords.iter().zip(&self.dims).rev() {
            idx = idx * d as u64 + u as u64;
        }
        idx
    }

    pub fn position_at(&self, mut index: u64) -> Position {
        let coords = self
            .dims
            .iter()
            .map(|&d| {
                let u = index % d as u64;
                index /= d as u64;
                u as i64
            })
            .collect();
        Position { coords }
    }

    /// Every node, in `node_index` order.
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        let count = self.node_count().expect("grid too large to enumerate");
        (0..count).map(move |i| self.position_at(i))
    }
}

impl fmt::Display for GridShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for GridShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims = s
            .trim()
            .split('x')
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::parse("grid shape", s, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        GridShape::new(dims)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    coords: Vec<i64>,
}

impl Position {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    /// Builds a position and validates it against `shape`.
    pub fn in_shape(coords: Vec<i64>, shape: &GridShape) -> Result<Self> {
        let p = Self { coords };
        shape.check(&p)?;
        Ok(p)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, axis: usize) -> i64 {
        self.coords[axis]
    }
}

impl From<Vec<i64>> for Position {
    fn from(coords: Vec<i64>) -> Self {
        Self { coords }
    }
}

impl<const N: usize> From<[i64; N]> for Position {
    fn from(coords: [i64; N]) -> Self {
        Self {
            coords: coords.to_vec(),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .trim()
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::parse("position", s, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Minus,
    Plus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Minus => -1,
            Direction::Plus => 1,
        }
    }

    /// Direction that moves `from` one step closer to `to` (`Plus` on ties).
    pub fn toward(from: i64, to: i64) -> Self {
        if to < from {
            Direction::Minus
        } else {
            Direction::Plus
        }
    }
}

/// A unit move along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jump {
    pub axis: usize,
    pub direction: Direction,
}

impl Jump {
    pub fn new(axis: usize, direction: Direction) -> Self {
        Self { axis, direction }
    }

    pub fn plus(axis: usize) -> Self {
        Self::new(axis, Direction::Plus)
    }

    pub fn minus(axis: usize) -> Self {
        Self::new(axis, Direction::Minus)
    }

    /// The jump leading from `p` to `q`, if they are adjacent.
    pub fn between(p: &Position, q: &Position) -> Option<Self> {
        if p.n() != q.n() {
            return None;
        }
        let mut found = None;
        for (axis, (&a, &b)) in p.coords.iter().zip(&q.coords).enumerate() {
            match b - a {
                0 => {}
                1 | -1 if found.is_none() => {
                    found = Some(Jump::new(axis, Direction::toward(a, b)));
                }
                _ => return None,
            }
        }
        found
    }

    /// Applies the jump without bounds checking.
    pub fn apply_unchecked(&self, p: &Position) -> Position {
        let mut coords = p.coords.clone();
        coords[self.axis] += self.direction.sign();
        Position { coords }
    }

    pub fn apply(&self, p: &Position, shape: &GridShape) -> Result<Position> {
        shape.check(p)?;
        if self.axis >= shape.n() {
            return Err(Error::InvalidPosition(format!(
                "jump axis {} out of range for {shape}",
                self.axis
            )));
        }
        let q = self.apply_unchecked(p);
        if !shape.contains(&q) {
            return Err(Error::InvalidPosition(format!(
                "jump {self} from {p} leaves {shape}"
            )));
        }
        Ok(q)
    }
}

impl fmt::Display for Jump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.direction {
            Direction::Minus => "-1",
            Direction::Plus => "+1",
        };
        write!(f, "{}:{}", self.axis, sign)
    }
}

impl FromStr for Jump {
    type Err = Error;

    /// Accepts `axis:+1` / `axis:-1` as well as the short `0+` / `1-` forms.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (axis, dir) = if let Some((a, d)) = t.split_once(':') {
            (a, d)
        } else if t.len() >= 2 && (t.ends_with('+') || t.ends_with('-')) {
            t.split_at(t.len() - 1)
        } else {
            return Err(Error::parse("jump", s, "expected <axis>:<+1|-1>"));
        };
        let axis = axis
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::parse("jump", s, e.to_string()))?;
        let direction = match dir.trim() {
            "+1" | "+" | "1" => Direction::Plus,
            "-1" | "-" => Direction::Minus,
            other => return Err(Error::parse("jump", s, format!("bad direction {other:?}"))),
        };
        Ok(Jump { axis, direction })
    }
}

pub fn is_adjacent(p: &Position, q: &Position, shape: &GridShape) -> Result<bool> {
    shape.check(p)?;
    shape.check(q)?;
    Ok(Jump::between(p, q).is_some())
}

/// In-bounds neighbors of `p`, ordered by ascending axis with `-1` before `+1`.
pub fn neighbors(p: &Position, shape: &GridShape) -> Result<Vec<Position>> {
    shape.check(p)?;
    Ok(neighbor_jumps(p, shape)
        .map(|j| j.apply_unchecked(p))
        .collect())
}

/// The legal jumps from a valid `p`, in neighbor order.
pub fn neighbor_jumps<'a>(p: &'a Position, shape: &'a GridShape) -> impl Iterator<Item = Jump> + 'a {
    (0..shape.n()).flat_map(move |axis| {
        let u = p.coord(axis);
        let d = shape.dim(axis);
        let minus = (u > 0).then(|| Jump::minus(axis));
        let plus = (u + 1 < d).then(|| Jump::plus(axis));
        minus.into_iter().chain(plus)
    })
}

pub fn manhattan(p: &Position, q: &Position) -> Result<u64> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            got: q.n(),
        });
    }
    Ok(manhattan_unchecked(p, q))
}

#[inline]
pub(crate) fn manhattan_unchecked(p: &Position, q: &Position) -> u64 {
    p.coords
        .iter()
        .zip(&q.coords)
        .map(|(a, b)| a.abs_diff(*b))
        .sum()
}

/// Cop positions plus the robber position at one instant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub cops: Vec<Position>,
    pub robber: Position,
}

impl Configuration {
    pub fn new(cops: Vec<Position>, robber: Position) -> Self {
        Self { cops, robber }
    }

    pub fn validate(&self, shape: &GridShape) -> Result<()> {
        if self.cops.is_empty() {
            return Err(Error::InvalidPosition("at least one cop is required".into()));
        }
        for c in &self.cops {
            shape.check(c)?;
        }
        shape.check(&self.robber)
    }

    pub fn cop_count(&self) -> usize {
        self.cops.len()
    }

    /// Index of the first cop sharing the robber's node.
    pub fn capturing_cop(&self) -> Option<usize> {
        self.cops.iter().position(|c| *c == self.robber)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("cops [")?;
        for (i, c) in self.cops.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "] robber [{}]", self.robber)
    }
}

/// Per-cop axis gaps, Manhattan totals and parities for one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceReport {
    pub gaps: Vec<Vec<u64>>,
    pub totals: Vec<u64>,
    /// `true` for odd distance.
    pub odd: Vec<bool>,
}

impl DistanceReport {
    pub fn total(&self, cop: usize) -> u64 {
        self.totals[cop]
    }

    pub fn is_odd(&self, cop: usize) -> bool {
        self.odd[cop]
    }
}

pub fn distance_report(c: &Configuration) -> Result<DistanceReport> {
    let n = c.robber.n();
    let mut gaps = Vec::with_capacity(c.cops.len());
    for cop in &c.cops {
        if cop.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: cop.n(),
            });
        }
        gaps.push(
            cop.coords
                .iter()
                .zip(&c.robber.coords)
                .map(|(a, b)| a.abs_diff(*b))
                .collect::<Vec<_>>(),
        );
    }
    let totals: Vec<u64> = gaps.iter().map(|g| g.iter().sum()).collect();
    let odd = totals.iter().map(|t| t % 2 == 1).collect();
    Ok(DistanceReport { gaps, totals, odd })
}

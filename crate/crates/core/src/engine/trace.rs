//! Line-oriented trace files.
//!
//! ```text
//! gridchase-trace v1
//! shape 3x3
//! cops 2
//! initial 0,0;2,2|1,1
//! robber-strategy greedy3
//! cop-strategies alg1:0 alg1:1
//! seed 42
//! tick 0 robber 1:-1 cops 0:+1,1:-1 capture none
//! tick 1 robber 0:+1 cops - capture robber:1
//! outcome captured jumps=2 cop=1 half=robber
//! ```
//!
//! `seed none` marks games that were not seeded. Parsing replays every
//! tick and rejects files whose recorded capture markers disagree with the
//! replayed positions.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{Capture, HalfStep, Outcome, TickRecord};
use crate::error::{Error, Result};
use crate::grid::{Configuration, GridShape, Jump, Position};

pub const TRACE_HEADER: &str = "gridchase-trace v1";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceMeta {
    pub robber: String,
    pub cops: Vec<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub shape: GridShape,
    pub initial: Configuration,
    pub records: Vec<TickRecord>,
    pub outcome: Outcome,
    pub meta: TraceMeta,
}

impl GameTrace {
    pub fn robber_jumps(&self) -> u64 {
        match self.outcome {
            Outcome::Captured { robber_jumps, .. } => robber_jumps,
            Outcome::Evaded { .. } => self.records.len() as u64,
        }
    }

    /// Configurations at which both sides have made the same number of
    /// jumps, starting with the initial one.
    pub fn full_tick_configs(&self) -> impl Iterator<Item = &Configuration> {
        std::iter::once(&self.initial).chain(self.records.iter().filter_map(|r| r.after_cops.as_ref()))
    }

    pub fn final_config(&self) -> &Configuration {
        self.records.last().map(|r| r.end()).unwrap_or(&self.initial)
    }

    /// Checks that every record follows from its predecessor by the recorded
    /// jumps and that the outcome agrees with the last record.
    pub fn check_replay(&self) -> Result<()> {
        self.initial.validate(&self.shape)?;
        let m = self.initial.cop_count();
        let mut state = self.initial.clone();
        for (k, rec) in self.records.iter().enumerate() {
            let here = |msg: String| Error::TraceFormat(format!("tick {k}: {msg}"));
            if rec.tick != k as u64 {
                return Err(here(format!("tick index {} out of sequence", rec.tick)));
            }
            if state.capturing_cop().is_some() {
                return Err(here("game continues after capture".into()));
            }
            let robber = rec
                .robber_jump
                .apply(&state.robber, &self.shape)
                .map_err(|e| here(e.to_string()))?;
            let after_robber = Configuration::new(state.cops.clone(), robber);
            if after_robber != rec.after_robber {
                return Err(here("robber half-step does not match the recorded jump".into()));
            }
            if rec.cop_jumps.len() != m {
                return Err(here(format!("{} cop entries for {m} cops", rec.cop_jumps.len())));
            }
            let robber_capture = after_robber.capturing_cop();
            let expected_capture;
            match (&rec.after_cops, robber_capture) {
                (None, Some(cop)) => {
                    if rec.cop_jumps.iter().any(Option::is_some) {
                        return Err(here("cops moved after a robber half-step capture".into()));
                    }
                    expected_capture = Some(Capture {
                        half_step: HalfStep::Robber,
                        cop,
                    });
                    state = after_robber;
                }
                (Some(after), None) => {
                    let mut cops = Vec::with_capacity(m);
                    for (i, (j, from)) in rec.cop_jumps.iter().zip(&after_robber.cops).enumerate() {
                        let j = j.ok_or_else(|| here(format!("cop {i} has no jump")))?;
                        cops.push(j.apply(from, &self.shape).map_err(|e| here(e.to_string()))?);
                    }
                    let replayed = Configuration::new(cops, after_robber.robber.clone());
                    if replayed != *after {
                        return Err(here("cop half-step does not match the recorded jumps".into()));
                    }
                    expected_capture = replayed.capturing_cop().map(|cop| Capture {
                        half_step: HalfStep::Cop,
                        cop,
                    });
                    state = replayed;
                }
                (Some(_), Some(_)) => {
                    return Err(here("cops moved although the robber half-step captured".into()))
                }
                (None, None) => return Err(here("missing cop half-step".into())),
            }
            if rec.capture != expected_capture {
                return Err(here("capture marker disagrees with the positions".into()));
            }
        }

        let last_capture = self.records.last().and_then(|r| r.capture);
        match self.outcome {
            Outcome::Captured {
                robber_jumps,
                cop,
                half_step: HalfStep::Initial,
            } => {
                if robber_jumps != 0 || !self.records.is_empty() || self.initial.capturing_cop() != Some(cop) {
                    return Err(Error::TraceFormat("inconsistent initial capture".into()));
                }
            }
            Outcome::Captured {
                robber_jumps,
                cop,
                half_step,
            } => {
                let ok = last_capture == Some(Capture { half_step, cop })
                    && robber_jumps == self.records.len() as u64;
                if !ok {
                    return Err(Error::TraceFormat("outcome disagrees with the last tick".into()));
                }
            }
            Outcome::Evaded { tick_cap } => {
                if last_capture.is_some() || self.initial.capturing_cop().is_some() {
                    return Err(Error::TraceFormat("evaded outcome on a captured game".into()));
                }
                if tick_cap != self.records.len() as u64 {
                    return Err(Error::TraceFormat(format!(
                        "evaded after {} ticks but cap is {tick_cap}",
                        self.records.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn write_cops(out: &mut String, cops: &[Position]) {
    for (i, c) in cops.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        let _ = write!(out, "{c}");
    }
}

impl fmt::Display for GameTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{TRACE_HEADER}")?;
        writeln!(f, "shape {}", self.shape)?;
        writeln!(f, "cops {}", self.initial.cop_count())?;
        let mut line = String::from("initial ");
        write_cops(&mut line, &self.initial.cops);
        let _ = write!(line, "|{}", self.initial.robber);
        writeln!(f, "{line}")?;
        writeln!(f, "robber-strategy {}", self.meta.robber)?;
        writeln!(f, "cop-strategies {}", self.meta.cops.join(" "))?;
        match self.meta.seed {
            Some(s) => writeln!(f, "seed {s}")?,
            None => writeln!(f, "seed none")?,
        }
        for rec in &self.records {
            write!(f, "tick {} robber {} cops ", rec.tick, rec.robber_jump)?;
            if rec.cop_jumps.iter().all(Option::is_none) {
                f.write_str("-")?;
            } else {
                for (i, j) in rec.cop_jumps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    match j {
                        Some(j) => write!(f, "{j}")?,
                        None => f.write_str("~")?,
                    }
                }
            }
            match rec.capture {
                Some(c) => writeln!(f, " capture {}:{}", c.half_step.as_str(), c.cop)?,
                None => writeln!(f, " capture none")?,
            }
        }
        match self.outcome {
            Outcome::Captured {
                robber_jumps,
                cop,
                half_step,
            } => writeln!(
                f,
                "outcome captured jumps={robber_jumps} cop={cop} half={}",
                half_step.as_str()
            ),
            Outcome::Evaded { tick_cap } => writeln!(f, "outcome evaded cap={tick_cap}"),
        }
    }
}

fn field<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::TraceFormat(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' ').or((rest.is_empty()).then_some(rest)))
        .ok_or_else(|| Error::TraceFormat(format!("expected `{key}`, found {line:?}")))
}

fn parse_half(s: &str) -> Result<HalfStep> {
    match s {
        "initial" => Ok(HalfStep::Initial),
        "robber" => Ok(HalfStep::Robber),
        "cop" => Ok(HalfStep::Cop),
        other => Err(Error::TraceFormat(format!("unknown half-step {other:?}"))),
    }
}

fn parse_kv<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::TraceFormat(format!("expected {key}=...")))
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::TraceFormat(format!("bad {what} {s:?}")))
}

impl FromStr for GameTrace {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().unwrap_or_default();
        if header.trim() != TRACE_HEADER {
            return Err(Error::TraceFormat(format!("unsupported header {header:?}")));
        }
        let shape: GridShape = field(lines.next(), "shape")?.parse()?;
        let m: usize = num(field(lines.next(), "cops")?, "cop count")?;
        let (cops_txt, robber_txt) = field(lines.next(), "initial")?
            .split_once('|')
            .ok_or_else(|| Error::TraceFormat("initial line needs cops|robber".into()))?;
        let cops = cops_txt
            .split(';')
            .map(str::parse::<Position>)
            .collect::<Result<Vec<_>>>()?;
        if cops.len() != m {
            return Err(Error::TraceFormat(format!("{} initial cops, header says {m}", cops.len())));
        }
        let initial = Configuration::new(cops, robber_txt.parse()?);
        initial.validate(&shape)?;
        let robber_name = field(lines.next(), "robber-strategy")?.to_string();
        let cop_names: Vec<String> = field(lines.next(), "cop-strategies")?
            .split_whitespace()
            .map(String::from)
            .collect();
        let seed = match field(lines.next(), "seed")? {
            "none" => None,
            s => Some(num(s, "seed")?),
        };

        let mut records = Vec::new();
        let mut state = initial.clone();
        let mut outcome = None;
        for line in lines {
            if outcome.is_some() {
                return Err(Error::TraceFormat("content after outcome line".into()));
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("tick") => {
                    let tick: u64 = num(tok.next().unwrap_or_default(), "tick")?;
                    if tok.next() != Some("robber") {
                        return Err(Error::TraceFormat(format!("tick {tick}: expected robber")));
                    }
                    let robber_jump: Jump = tok.next().unwrap_or_default().parse()?;
                    if tok.next() != Some("cops") {
                        return Err(Error::TraceFormat(format!("tick {tick}: expected cops")));
                    }
                    let cop_field = tok.next().unwrap_or_default();
                    let cop_jumps: Vec<Option<Jump>> = if cop_field == "-" {
                        vec![None; m]
                    } else {
                        cop_field
                            .split(',')
                            .map(|j| if j == "~" { Ok(None) } else { j.parse().map(Some) })
                            .collect::<Result<_>>()?
                    };
                    if tok.next() != Some("capture") {
                        return Err(Error::TraceFormat(format!("tick {tick}: expected capture")));
                    }
                    let capture = match tok.next().unwrap_or_default() {
                        "none" => None,
                        c => {
                            let (h, i) = c
                                .split_once(':')
                                .ok_or_else(|| Error::TraceFormat(format!("bad capture {c:?}")))?;
                            Some(Capture {
                                half_step: parse_half(h)?,
                                cop: num(i, "cop index")?,
                            })
                        }
                    };
                    // Rebuild the half-step configurations; check_replay validates them.
                    let robber = robber_jump.apply_unchecked(&state.robber);
                    let after_robber = Configuration::new(state.cops.clone(), robber);
                    let after_cops = if cop_jumps.iter().all(Option::is_none) {
                        None
                    } else {
                        let cops = cop_jumps
                            .iter()
                            .zip(&after_robber.cops)
                            .map(|(j, c)| j.map_or_else(|| c.clone(), |j| j.apply_unchecked(c)))
                            .collect();
                        Some(Configuration::new(cops, after_robber.robber.clone()))
                    };
                    let rec = TickRecord {
                        tick,
                        robber_jump,
                        cop_jumps,
                        after_robber,
                        after_cops,
                        capture,
                    };
                    state = rec.end().clone();
                    records.push(rec);
                }
                Some("outcome") => {
                    outcome = Some(match tok.next() {
                        Some("captured") => Outcome::Captured {
                            robber_jumps: num(parse_kv(tok.next(), "jumps")?, "jumps")?,
                            cop: num(parse_kv(tok.next(), "cop")?, "cop")?,
                            half_step: parse_half(parse_kv(tok.next(), "half")?)?,
                        },
                        Some("evaded") => Outcome::Evaded {
                            tick_cap: num(parse_kv(tok.next(), "cap")?, "cap")?,
                        },
                        other => {
                            return Err(Error::TraceFormat(format!("unknown outcome {other:?}")))
                        }
                    });
                }
                other => return Err(Error::TraceFormat(format!("unexpected line start {other:?}"))),
            }
        }
        let outcome = outcome.ok_or_else(|| Error::TraceFormat("missing outcome line".into()))?;
        let trace = GameTrace {
            shape,
            initial,
            records,
            outcome,
            meta: TraceMeta {
                robber: robber_name,
                cops: cop_names,
                seed,
            },
        };
        trace.check_replay()?;
        Ok(trace)
    }
}

//! Terminal play: a human moves the robber, the cops answer.

use std::io::{self, BufRead, Write};

use gridchase_core::experiments::random_initial_configuration;
use gridchase_core::grid::neighbor_jumps;
use gridchase_core::robbers::InteractiveRobber;
use gridchase_core::{run, Configuration, CopStrategySpec, Error, GameTrace, GridShape, HalfStep, Jump, Outcome};

use crate::args::PlayArgs;
use crate::commands::{outcome_line, resolve_setup};
use crate::Failure;

/// Text board for one- and two-dimensional grids, axis 1 growing upward;
/// a coordinate listing otherwise.
pub fn render(config: &Configuration, shape: &GridShape) -> String {
    let mut s = String::new();
    if shape.n() > 2 {
        s.push_str(&format!("robber {}\n", config.robber));
        for (i, c) in config.cops.iter().enumerate() {
            s.push_str(&format!("cop {i} {c}\n"));
        }
        return s;
    }
    let width = shape.dim(0);
    let height = if shape.n() == 2 { shape.dim(1) } else { 1 };
    for y in (0..height).rev() {
        for x in 0..width {
            let here = |p: &gridchase_core::Position| p.coord(0) == x && (shape.n() == 1 || p.coord(1) == y);
            let cops: Vec<usize> = (0..config.cop_count()).filter(|&i| here(&config.cops[i])).collect();
            let ch = match (here(&config.robber), cops.as_slice()) {
                (true, []) => 'R',
                (true, _) => 'X',
                (false, []) => '.',
                (false, [i]) if *i < 10 => char::from_digit(*i as u32, 10).unwrap_or('C'),
                (false, _) => '*',
            };
            s.push(ch);
            if x + 1 < width {
                s.push(' ');
            }
        }
        s.push('\n');
    }
    s
}

/// Reads a jump: `axis:+1`, `axis:-1`, `0+`, or `a`/`d`/`w`/`s` in two dimensions.
fn parse_move(line: &str, shape: &GridShape) -> Option<Jump> {
    let keys = match (line, shape.n()) {
        ("a", _) => Some(Jump::minus(0)),
        ("d", _) => Some(Jump::plus(0)),
        ("w", 2) => Some(Jump::plus(1)),
        ("s", 2) => Some(Jump::minus(1)),
        _ => None,
    };
    keys.or_else(|| line.parse::<Jump>().ok())
}

fn ask<R: BufRead, W: Write>(
    config: &Configuration,
    shape: &GridShape,
    tick: u64,
    input: &mut R,
    out: &mut W,
) -> gridchase_core::Result<Jump> {
    let legal: Vec<Jump> = neighbor_jumps(&config.robber, shape).collect();
    write!(out, "\ntick {tick}\n{}", render(config, shape))?;
    let names: Vec<String> = legal.iter().map(ToString::to_string).collect();
    loop {
        let keys = if shape.n() <= 2 { ", a/d/w/s" } else { "" };
        write!(out, "move [{}{keys}, q quits]> ", names.join(" "))?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Err(Error::Aborted);
        }
        let line = line.trim();
        if matches!(line, "q" | "quit") {
            return Err(Error::Aborted);
        }
        match parse_move(line, shape) {
            Some(j) if legal.contains(&j) => return Ok(j),
            Some(j) => writeln!(out, "{j} leaves the grid")?,
            None => writeln!(out, "cannot read {line:?} as a move")?,
        }
    }
}

/// Runs one session. `None` means the player quit.
pub fn play_session<R: BufRead, W: Write>(
    shape: &GridShape,
    initial: &Configuration,
    cops: &[CopStrategySpec],
    seed: u64,
    cap: u64,
    input: &mut R,
    out: &mut W,
) -> Result<Option<GameTrace>, Failure> {
    let mut strategies = CopStrategySpec::build_all(cops, shape, seed)?;
    let names: Vec<String> = cops.iter().map(ToString::to_string).collect();
    writeln!(out, "grid {shape}, cops {}, robber R, up to {cap} moves", names.join(","))?;
    let result = {
        let mut robber = InteractiveRobber::new(|c: &Configuration, g: &GridShape, t: u64| ask(c, g, t, input, out));
        run(shape, initial, &mut robber, &mut strategies, cap)
    };
    match result {
        Err(Error::Aborted) => {
            writeln!(out, "quit")?;
            Ok(None)
        }
        Err(e) => Err(e.into()),
        Ok(trace) => {
            write!(out, "\n{}", render(trace.final_config(), shape))?;
            let msg = match trace.outcome {
                Outcome::Captured {
                    half_step: HalfStep::Robber,
                    cop,
                    ..
                } => format!("you moved onto cop {cop}"),
                Outcome::Captured {
                    half_step: HalfStep::Initial,
                    cop,
                    ..
                } => format!("cop {cop} starts on your node"),
                Outcome::Captured { cop, .. } => format!("cop {cop} caught you"),
                Outcome::Evaded { .. } => "you escaped".to_string(),
            };
            writeln!(out, "{msg}")?;
            writeln!(out, "outcome = {}", outcome_line(&trace.outcome))?;
            Ok(Some(trace))
        }
    }
}

pub fn play(a: PlayArgs) -> Result<u8, Failure> {
    let (initial, cops) = resolve_setup(&a.game)?;
    let g = &a.game;
    let initial = initial.unwrap_or_else(|| random_initial_configuration(&g.shape, cops.len(), g.seed));
    let cap = g
        .cap
        .unwrap_or_else(|| gridchase_core::cops::default_tick_cap(&g.shape, &cops));
    let stdin = io::stdin();
    let stdout = io::stdout();
    play_session(&g.shape, &initial, &cops, g.seed, cap, &mut stdin.lock(), &mut stdout.lock())?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn session(shape: &str, init: Configuration, cops: &str, input: &str) -> (Option<GameTrace>, String) {
        let g: GridShape = shape.parse().unwrap();
        let cops = CopStrategySpec::parse_list(cops).unwrap();
        let mut out = Vec::new();
        let t = play_session(&g, &init, &cops, 0, 100, &mut Cursor::new(input.as_bytes()), &mut out).unwrap();
        (t, String::from_utf8(out).unwrap())
    }

    #[test]
    fn board_marks_agents() {
        let g: GridShape = "3x2".parse().unwrap();
        let c = Configuration::new(vec![[0, 0].into(), [2, 1].into()], [1, 1].into());
        assert_eq!(render(&c, &g), ". R 1\n0 . .\n");
        let c = Configuration::new(vec![[1, 1].into()], [1, 1].into());
        assert_eq!(render(&c, &g), ". X .\n. . .\n");
    }

    #[test]
    fn quit_exits_cleanly() {
        let init = Configuration::new(vec![[0, 0].into()], [3, 3].into());
        let (t, out) = session("5x5", init, "alg2s", "q\n");
        assert!(t.is_none());
        assert!(out.ends_with("quit\n"));
    }

    #[test]
    fn bad_input_reprompts() {
        let init = Configuration::new(vec![[0, 0].into()], [4, 4].into());
        let (t, out) = session("5x5", init, "alg2s", "hello\n0:+1\n\nq\n");
        assert!(t.is_none());
        assert!(out.contains("cannot read \"hello\""));
        assert!(out.contains("0:+1 leaves the grid"));
        assert!(out.contains("cannot read \"\""));
    }

    #[test]
    fn moving_onto_a_cop_is_immediate_capture() {
        let init = Configuration::new(vec![[0, 0].into()], [1, 0].into());
        let (t, out) = session("3x3", init, "alg1:0", "a\n");
        let t = t.unwrap();
        assert!(matches!(t.outcome, Outcome::Captured { half_step: HalfStep::Robber, robber_jumps: 1, .. }));
        assert!(out.contains("you moved onto cop 0"));
    }

    #[test]
    fn cyclic_pair_catches_any_human_within_bound() {
        // Always moving along axis 0 and bouncing between walls.
        let g: GridShape = "10x10".parse().unwrap();
        let init = Configuration::new(vec![[0, 0].into(), [0, 9].into()], [9, 5].into());
        let moves = "a\n".repeat(9) + &"d\n".repeat(9) + &"a\n".repeat(9) + &"d\n".repeat(9) + &"a\n".repeat(9);
        let cops = CopStrategySpec::parse_list("alg1:0,alg1:1").unwrap();
        let mut out = Vec::new();
        let t = play_session(&g, &init, &cops, 0, 100, &mut Cursor::new(moves.as_bytes()), &mut out)
            .unwrap()
            .unwrap();
        assert!(t.outcome.is_captured());
        assert!(t.robber_jumps() <= 40);
    }

    #[test]
    fn three_dimensional_listing() {
        let init = Configuration::new(vec![[0, 0, 0].into()], [1, 1, 1].into());
        let (_, out) = session("2x2x2", init, "alg1:0", "q\n");
        assert!(out.contains("robber 1,1,1\ncop 0 0,0,0\n"));
    }
}

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gridchase_core::experiments::{run_experiment, summary_text, TRIALS_CSV_HEADER, TRIALS_CSV_VERSION};
use gridchase_core::verification::{
    self as v, check_lemma3_random, check_lemma4_sweep, check_random_traces, check_theorem1, check_theorem2,
    check_theorem3_and_5, check_theorem4, check_trace_invariants, parity_census, ClaimReport, EvasionOptions,
};
use gridchase_core::{
    simulate_game, Configuration, CopStrategySpec, ExperimentSpec, GameTrace, GridShape, Outcome, RobberStrategySpec,
};

use crate::args::{Claim, EnumerateArgs, ExperimentArgs, GameSetup, SimulateArgs, VerifyArgs};
use crate::Failure;

type CmdResult = Result<u8, Failure>;

fn shapes(list: &[&str]) -> Vec<GridShape> {
    list.iter().map(|s| s.parse().expect("built-in shape")).collect()
}

fn create_parent(path: &Path) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    create_parent(path)?;
    fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn outcome_line(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Captured {
            robber_jumps,
            cop,
            half_step,
        } => format!("captured robber_jumps={robber_jumps} cop={cop} half_step={}", half_step.as_str()),
        Outcome::Evaded { tick_cap } => format!("evaded tick_cap={tick_cap}"),
    }
}

/// Initial configuration and cop strategies from the shared game flags.
pub fn resolve_setup(game: &GameSetup) -> Result<(Option<Configuration>, Vec<CopStrategySpec>), Failure> {
    let shape = &game.shape;
    let initial = match (&game.init_cops, &game.init_robber) {
        (Some(cops), Some(robber)) => {
            let cops = v::parse_positions(cops).map_err(|e| Failure::Usage(format!("--init-cops: {e}")))?;
            let c = Configuration::new(cops, robber.clone());
            c.validate(shape).map_err(|e| Failure::Usage(format!("initial positions: {e}")))?;
            Some(c)
        }
        _ => None,
    };
    let cops = if game.cops.is_empty() {
        let m = initial.as_ref().map_or(shape.n(), Configuration::cop_count);
        (0..m)
            .map(|i| CopStrategySpec::AlgorithmOne { index: i % shape.n() })
            .collect()
    } else {
        game.cops.clone()
    };
    for c in &cops {
        c.validate(shape).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    if let Some(init) = &initial {
        if init.cop_count() != cops.len() {
            return Err(Failure::Usage(format!(
                "{} initial cop positions for {} cop strategies",
                init.cop_count(),
                cops.len()
            )));
        }
    }
    Ok((initial, cops))
}

fn join_specs(cops: &[CopStrategySpec]) -> String {
    cops.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn simulate(a: SimulateArgs) -> CmdResult {
    if a.robber == RobberStrategySpec::Interactive {
        return Err(Failure::Usage("use `play` for the interactive robber".into()));
    }
    let (initial, cops) = resolve_setup(&a.game)?;
    let g = &a.game;
    let trace = simulate_game(&g.shape, &cops, &a.robber, initial, g.seed, g.cap)?;
    let text = trace.to_string();
    if a.print_trace {
        print!("{text}");
        return Ok(0);
    }
    let path = a
        .trace
        .unwrap_or_else(|| a.out.out_dir.join(format!("game-{}.trace", g.seed)));
    write_file(&path, &text)?;
    println!("shape = {}", g.shape);
    println!("cops = {}", join_specs(&cops));
    println!("robber = {}", a.robber);
    println!("seed = {}", g.seed);
    println!("initial = {}", trace.initial);
    println!("outcome = {}", outcome_line(&trace.outcome));
    println!("trace = {}", path.display());
    Ok(0)
}

pub fn experiment(a: ExperimentArgs) -> CmdResult {
    if a.robber == RobberStrategySpec::Interactive {
        return Err(Failure::Usage("experiments cannot use the interactive robber".into()));
    }
    let cops = if a.cops.is_empty() {
        CopStrategySpec::full_algorithm_one_set(&a.shape)
    } else {
        a.cops.clone()
    };
    let mut spec = ExperimentSpec::new(a.shape.clone(), cops, a.robber.clone(), a.trials, a.seed);
    spec.tick_cap = a.cap;
    spec.workers = a.workers;
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let csv_path = a.csv.unwrap_or_else(|| a.out.out_dir.join(format!("{}.csv", a.name)));
    let summary_path = a
        .summary
        .unwrap_or_else(|| a.out.out_dir.join(format!("{}-summary.txt", a.name)));
    create_parent(&csv_path)?;
    let file = File::create(&csv_path).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", csv_path.display())))?;
    let mut csv = BufWriter::new(file);
    writeln!(csv, "{TRIALS_CSV_VERSION}")?;
    writeln!(csv, "{TRIALS_CSV_HEADER}")?;
    let stats = run_experiment(&spec, |rec| {
        writeln!(csv, "{}", rec.csv_row())?;
        Ok(())
    })?;
    csv.flush()?;
    let summary = summary_text(&spec, &stats);
    write_file(&summary_path, &summary)?;
    print!("{summary}");
    println!("csv = {}", csv_path.display());
    println!("summary = {}", summary_path.display());
    Ok(0)
}

fn evasion_cops(shape: &GridShape, requested: Option<usize>) -> usize {
    requested.unwrap_or(shape.n().saturating_sub(1).max(1))
}

fn claim_reports(claim: Claim, a: &VerifyArgs) -> Result<Vec<ClaimReport>, Failure> {
    let pick = |defaults: &[&str]| if a.shapes.is_empty() { shapes(defaults) } else { a.shapes.clone() };
    let mut out = Vec::new();
    match claim {
        Claim::Lemma1 => {
            let list = pick(&["3x3", "10x10", "4x4x4"]);
            out.push(check_random_traces(&list, a.random_traces, a.seed)?);
        }
        Claim::Lemma3 => {
            for g in pick(&["10x10", "4x4x4"]) {
                out.push(check_lemma3_random(&g, a.random_traces, a.seed)?);
            }
        }
        Claim::Lemma4 => {
            let robbers = [
                RobberStrategySpec::greedy(1),
                RobberStrategySpec::greedy(2),
                RobberStrategySpec::greedy(3),
                RobberStrategySpec::Random { seed: a.seed },
            ];
            for g in pick(&["4x4", "5x5"]) {
                if g.n() != 2 {
                    return Err(Failure::Usage(format!("lemma4 needs two-dimensional shapes, got {g}")));
                }
                out.push(check_lemma4_sweep(&g, &robbers)?);
            }
        }
        Claim::Theorem1 => {
            let opts = EvasionOptions {
                horizon: a.horizon,
                random_cop_games: a.random_cop_games,
                seed: a.seed,
            };
            for g in pick(&["3x3", "2x2x2"]) {
                out.push(check_theorem1(&g, evasion_cops(&g, a.cops), opts)?);
            }
        }
        Claim::Theorem2 => {
            for g in pick(&["2x2", "2x3", "3x3", "2x2x2"]) {
                out.push(check_theorem2(&g, a.budget)?);
            }
        }
        Claim::Theorem3 => {
            let list = pick(&["4x4", "5x5", "6x6"]);
            if let Some(g) = list.iter().find(|g| g.n() != 2) {
                return Err(Failure::Usage(format!("theorem3 needs two-dimensional shapes, got {g}")));
            }
            let mut constant = a.constant;
            for g in &list {
                let r = check_theorem3_and_5(g, constant, a.budget)?;
                if constant.is_none() {
                    constant = r.stat("smallest_constant").and_then(|c| c.parse().ok());
                }
                out.push(r);
            }
        }
        Claim::Theorem4 => {
            for g in pick(&["3x3", "10x10"]) {
                let mut r = check_theorem4(&g);
                if a.mc_trials > 0 && g.n() == 2 {
                    let est = gridchase_core::experiments::theorem4_frequency(
                        &g,
                        a.mc_trials,
                        a.seed,
                        RobberStrategySpec::greedy(2),
                    )?;
                    r.stats.push(("mc_trials".into(), est.trials.to_string()));
                    r.stats.push(("mc_capture_fraction".into(), format!("{:.6}", est.fraction)));
                    r.stats.push(("mc_std_error".into(), format!("{:.6}", est.std_error)));
                }
                out.push(r);
            }
        }
        Claim::Trace => {
            if a.trace.is_empty() {
                return Err(Failure::Usage("--claim trace needs at least one --trace file".into()));
            }
            for path in &a.trace {
                let text = fs::read_to_string(path)
                    .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
                let trace: GameTrace = text
                    .parse()
                    .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
                let mut r = check_trace_invariants(&trace)?;
                r.scope = format!("{} ({})", path.display(), r.scope);
                out.push(r);
            }
        }
        Claim::All => {
            for c in [
                Claim::Lemma1,
                Claim::Lemma3,
                Claim::Lemma4,
                Claim::Theorem1,
                Claim::Theorem2,
                Claim::Theorem3,
                Claim::Theorem4,
            ] {
                // Shape lists differ per claim; only defaults make sense here.
                out.extend(claim_reports(c, a)?);
            }
        }
    }
    Ok(out)
}

pub fn verify(a: VerifyArgs) -> CmdResult {
    if a.claim == Claim::All && !a.shapes.is_empty() {
        return Err(Failure::Usage("--shapes needs a single --claim".into()));
    }
    let reports = claim_reports(a.claim, &a)?;
    let mut text = String::new();
    let mut violated = 0;
    for (k, r) in reports.iter().enumerate() {
        let mut block = r.to_string();
        if let Some(w) = r.witness() {
            violated += 1;
            let path: PathBuf = a.out.out_dir.join(format!("witness-{}-{k}.trace", r.claim));
            write_file(&path, &w.to_string())?;
            block.push_str(&format!("witness = {}\n", path.display()));
        }
        if k > 0 {
            text.push('\n');
        }
        text.push_str(&block);
    }
    print!("{text}");
    if let Some(path) = &a.report {
        write_file(path, &text)?;
    }
    Ok(if violated > 0 { 1 } else { 0 })
}

pub fn enumerate(a: EnumerateArgs) -> CmdResult {
    for (k, g) in a.shapes.iter().enumerate() {
        let m = evasion_cops(g, a.cops);
        if m == 0 {
            return Err(Failure::Usage("--cops must be at least 1".into()));
        }
        let c = parity_census(g, m)?;
        let frac = v::enumerate_parity_fraction(g);
        if k > 0 {
            println!();
        }
        println!("shape = {g}");
        println!("nodes = {}", c.nodes);
        println!("cops = {m}");
        println!("configurations = {}", c.configurations);
        println!("all_cops_odd = {}", c.all_odd);
        println!("all_cops_even = {}", c.all_even);
        println!("mixed_parity = {}", c.configurations - c.all_odd - c.all_even);
        println!("pair_even_fraction = {frac}");
        println!(
            "pair_even_fraction_decimal = {:.6}",
            *frac.numer() as f64 / *frac.denom() as f64
        );
    }
    Ok(0)
}

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use gridchase_core::{GameTrace, HalfStep, Outcome};

fn gridchase(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridchase"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRIDCHASE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_trace(path: &Path) -> GameTrace {
    fs::read_to_string(path).unwrap().parse().unwrap()
}

#[test]
fn simulate_cyclic_pair_captures_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridchase(dir.path(), &["simulate", "--shape", "3x3", "--cops", "alg1:0,alg1:1", "--robber", "greedy3", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let t = read_trace(&dir.path().join("game-42.trace"));
    assert!(t.outcome.is_captured());
    assert!(t.robber_jumps() <= 12);
    assert_eq!(t.meta.seed, Some(42));
}

#[test]
fn simulate_evader_escapes_single_cop() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridchase(
        dir.path(),
        &["simulate", "--shape", "3x3", "--cops", "alg1:0", "--robber", "evader", "--init-cops", "0,0", "--init-robber", "1,0", "--cap", "1000", "--trace", "e.trace"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outcome = evaded tick_cap=1000"));
    assert_eq!(read_trace(&dir.path().join("e.trace")).outcome, Outcome::Evaded { tick_cap: 1000 });
}

#[test]
fn simulate_shared_start_is_immediate_capture() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridchase(dir.path(), &["simulate", "--shape", "2x2", "--init-cops", "0,0", "--init-robber", "0,0", "--print-trace"]);
    assert_eq!(o.status.code(), Some(0));
    let t: GameTrace = stdout(&o).parse().unwrap();
    assert_eq!(
        t.outcome,
        Outcome::Captured {
            robber_jumps: 0,
            cop: 0,
            half_step: HalfStep::Initial
        }
    );
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--shape", "12x9", "--cops", "alg1:1,random:3", "--robber", "greedy2:random-tie:5", "--seed", "8", "--print-trace"];
    let a = gridchase(dir.path(), &args);
    let b = gridchase(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn experiment_files_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let o = gridchase(
            dir.path(),
            &["experiment", "--shape", "10x10", "--robber", "greedy3", "--trials", "5000", "--seed", "7", "--workers", workers, "--name", name],
        );
        assert_eq!(o.status.code(), Some(0), "{o:?}");
        let csv = fs::read(dir.path().join(format!("{name}.csv"))).unwrap();
        let summary = fs::read(dir.path().join(format!("{name}-summary.txt"))).unwrap();
        (csv, summary)
    };
    let one = run("a", "1");
    assert_eq!(one, run("b", "1"));
    assert_eq!(one, run("c", "4"));
    assert_eq!(one, run("d", "0"));
    let csv = String::from_utf8(one.0).unwrap();
    assert_eq!(csv.lines().count(), 5002);
    assert!(csv.starts_with("# gridchase-trials v1\ntrial_index,seed,"));
    let summary = String::from_utf8(one.1).unwrap();
    assert!(summary.contains("master_seed = 7\n"));
    assert!(summary.contains("evasions = 0\n"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["experiment", "--shape", "10x10", "--trials", "0"],
        vec!["simulate", "--shape", "3x1"],
        vec!["simulate", "--shape", "3x3", "--cops", "alg1:2"],
        vec!["simulate", "--shape", "3x3", "--init-cops", "0,0"],
        vec!["simulate", "--shape", "3x3", "--init-cops", "0,0;1,1", "--init-robber", "2,2", "--cops", "alg1:0"],
        vec!["simulate", "--shape", "3x3", "--init-cops", "5,0", "--init-robber", "2,2"],
        vec!["simulate", "--shape", "3x3", "--robber", "greedy9"],
        vec!["verify", "--claim", "nope"],
        vec!["frobnicate"],
    ] {
        let o = gridchase(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {o:?}");
    }
}

#[test]
fn illegal_robber_move_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("moves.txt"), "0:-1\n").unwrap();
    let o = gridchase(
        dir.path(),
        &["simulate", "--shape", "3x3", "--init-cops", "2,2", "--init-robber", "0,0", "--robber", "scripted:moves.txt"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("illegal move by robber"));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = gridchase(dir.path(), &["verify", "--claim", "theorem2", "--shapes", "2x2,3x3,2x2x2"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).matches("verdict = holds").count(), 3);

    let flagged = gridchase(dir.path(), &["verify", "--claim", "theorem4", "--shape", "3x3"]);
    assert_eq!(flagged.status.code(), Some(0));
    assert!(stdout(&flagged).contains("verdict = flagged"));

    let infeasible = gridchase(dir.path(), &["verify", "--claim", "theorem2", "--shapes", "3x3", "--budget", "10"]);
    assert_eq!(infeasible.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&infeasible.stderr).contains("3x3"));

    let violated = gridchase(dir.path(), &["verify", "--claim", "theorem3", "--shapes", "5x5", "--constant", "0"]);
    assert_eq!(violated.status.code(), Some(1));
    let out = stdout(&violated);
    let witness = out.lines().find_map(|l| l.strip_prefix("witness = ")).expect("witness path");
    let replay = gridchase(dir.path(), &["verify", "--claim", "trace", "--trace", witness]);
    assert_eq!(replay.status.code(), Some(0));
}

#[test]
fn verify_random_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridchase(dir.path(), &["verify", "--claim", "lemma1", "--random-traces", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("checked = 1000"));
}

#[test]
fn config_file_and_out_dir_env() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.conf"), "# defaults\nshape = 6x6\nrobber = greedy2\ntrials = 300\nseed = 5\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gridchase"))
        .args(["experiment", "--config", "run.conf", "--trials", "40"])
        .current_dir(dir.path())
        .env("GRIDCHASE_OUT_DIR", "results")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let summary = fs::read_to_string(dir.path().join("results/experiment-summary.txt")).unwrap();
    assert!(summary.contains("shape = 6x6\n"));
    assert!(summary.contains("robber = greedy2\n"));
    assert!(summary.contains("trials = 40\n"));
    assert!(summary.contains("master_seed = 5\n"));

    fs::write(dir.path().join("bad.conf"), "nonsense = 1\n").unwrap();
    let o = gridchase(dir.path(), &["experiment", "--config", "bad.conf", "--shape", "3x3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = gridchase(dir.path(), &["enumerate", "--shapes", "3x3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("all_cops_odd = 40\n"));
    assert!(out.contains("pair_even_fraction = 41/81\n"));
}

#[test]
fn play_quits_cleanly_and_reprompts() {
    let dir = tempfile::tempdir().unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_gridchase"))
        .args(["play", "--shape", "4x4", "--init-cops", "0,0;3,3", "--init-robber", "1,2"])
        .current_dir(dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"up\nq\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("cannot read \"up\""));
    assert!(out.trim_end().ends_with("quit"));
}

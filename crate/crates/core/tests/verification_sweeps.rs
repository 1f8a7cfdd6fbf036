use gridchase_core::cops::AlgorithmOne;
use gridchase_core::robbers::ScriptedRobber;
use gridchase_core::verification::{
    adversarial_survival, check_lemma3_random, check_lemma4_sweep, check_theorem1, check_theorem2,
    check_theorem3_and_5, enumerate_parity_fraction, robber_script, EvasionOptions, DEFAULT_NODE_BUDGET,
};
use gridchase_core::{run, Configuration, CopStrategySpec, GridShape, Position, RobberStrategySpec, TieRule, Verdict};
use num_rational::Ratio;

fn shape(s: &str) -> GridShape {
    s.parse().unwrap()
}

/// Counts node pairs at even distance by direct enumeration.
fn even_pairs(g: &GridShape) -> Ratio<u128> {
    let nodes: Vec<Position> = g.positions().collect();
    let even = nodes
        .iter()
        .flat_map(|a| nodes.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a.coords().iter().zip(b.coords()).map(|(x, y)| x.abs_diff(*y)).sum::<u64>() % 2 == 0)
        .count();
    Ratio::new(even as u128, (nodes.len() * nodes.len()) as u128)
}

#[test]
fn parity_fraction_is_half_on_even_grids() {
    for a in (2..=12).step_by(2) {
        for b in (2..=12).step_by(2) {
            let g = GridShape::new(vec![a, b]).unwrap();
            assert_eq!(enumerate_parity_fraction(&g), even_pairs(&g), "{g}");
            assert_eq!(enumerate_parity_fraction(&g), Ratio::new(1, 2), "{g}");
        }
    }
}

#[test]
fn parity_fraction_matches_enumeration_on_mixed_grids() {
    for s in ["3x5", "7x7", "2x9", "3x3x3", "2x3x5"] {
        let g = shape(s);
        assert_eq!(enumerate_parity_fraction(&g), even_pairs(&g), "{s}");
    }
}

#[test]
fn capture_sweep_small_grids() {
    for s in ["2x2", "2x4", "3x4", "4x4", "2x2x3"] {
        let r = check_theorem2(&shape(s), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
    }
}

/// Every grid with at most 81 nodes and at most three axes.
#[test]
#[ignore = "about 10 minutes on one core; run with --ignored"]
fn capture_sweep_all_grids_up_to_81_nodes() {
    let mut shapes = Vec::new();
    for a in 2..=40i64 {
        for b in a..=40 {
            if a * b <= 81 {
                shapes.push(vec![a, b]);
            }
            for c in b..=20 {
                if a * b * c <= 81 {
                    shapes.push(vec![a, b, c]);
                }
            }
        }
    }
    for dims in shapes {
        let g = GridShape::new(dims).unwrap();
        let r = check_theorem2(&g, u64::MAX).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
    }
}

#[test]
fn evasion_sweep_includes_4x4() {
    for (s, m) in [("3x3", 1), ("4x4", 1), ("2x2x2", 1), ("2x2x2", 2)] {
        let r = check_theorem1(&shape(s), m, EvasionOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        assert!(r.checked > 0);
    }
}

#[test]
fn linear_constant_carries_to_larger_grids() {
    let base = check_theorem3_and_5(&shape("4x4"), None, DEFAULT_NODE_BUDGET).unwrap();
    let c: u64 = base.stat("smallest_constant").unwrap().parse().unwrap();
    for s in ["5x5", "6x6", "8x8", "4x9", "10x10"] {
        let r = check_theorem3_and_5(&shape(s), Some(c), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
    }
}

#[test]
fn violated_verdict_carries_a_replayable_witness() {
    // A zero constant is false for any grid where capture takes a jump.
    let g = shape("5x5");
    let r = check_theorem3_and_5(&g, Some(0), DEFAULT_NODE_BUDGET).unwrap();
    let witness = r.witness().expect("violation with witness").clone();
    let t_max: u64 = r.stat("t_max").unwrap().parse().unwrap();
    assert!(t_max > 0);
    witness.check_replay().unwrap();
    assert_eq!(witness.robber_jumps(), t_max);

    let mut robber = ScriptedRobber::new(robber_script(&witness));
    let mut cops = CopStrategySpec::build_all(&[CopStrategySpec::AlgorithmTwo { tie: TieRule::Deterministic }], &g, 0).unwrap();
    let again = run(&g, &witness.initial, &mut robber, &mut cops, witness.records.len() as u64).unwrap();
    assert_eq!(again.outcome, witness.outcome);
    assert_eq!(again.records, witness.records);
}

#[test]
fn survival_grows_with_horizon() {
    let g = shape("4x4");
    let init = Configuration::new(vec![[0, 0].into(), [3, 3].into()], [1, 2].into());
    let mut last = 0;
    for h in [0, 1, 2, 3, 5, 8, 100] {
        let mut cops = vec![AlgorithmOne::new(0), AlgorithmOne::new(1)];
        let v = adversarial_survival(&g, &mut cops, &init, h, DEFAULT_NODE_BUDGET).unwrap();
        assert!(v >= last && v <= h);
        last = v;
    }
}

#[test]
fn lemma3_holds_on_random_games() {
    for s in ["10x10", "4x4x4", "7x3"] {
        let r = check_lemma3_random(&shape(s), 300, 11).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
    }
}

#[test]
fn lemma4_holds_on_every_even_start() {
    let robbers = [
        RobberStrategySpec::greedy(1),
        RobberStrategySpec::greedy(2),
        RobberStrategySpec::greedy(3),
        RobberStrategySpec::Random { seed: 3 },
    ];
    for s in ["4x4", "5x6"] {
        let r = check_lemma4_sweep(&shape(s), &robbers).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r}");
        assert!(r.checked > 0);
    }
}

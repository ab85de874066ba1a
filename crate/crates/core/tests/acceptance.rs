//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! `cargo test --test acceptance -- 3 5` runs only criteria 3 and 5.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mcts_maxsat::bench::{self, Format, GeneratedBatch, Mode, RunSpec};
use mcts_maxsat::blp::{objective, to_blp};
use mcts_maxsat::budget::theory_budgets;
use mcts_maxsat::dimacs::{parse_cnf, write_dimacs};
use mcts_maxsat::enumerate::{enumerate, split_seed};
use mcts_maxsat::formula::{generate_random, Clause, Formula, GeneratorSpec, ProblemClass};
use mcts_maxsat::mcts::{
    backup, exploration_candidates, projected_significance, rank, select_best_child,
    select_exploration_child, significance, solve, solve_with_observer, uct_scores, ExploitRule,
    SearchTree, SolverConfig,
};
use mcts_maxsat::oracle::brute_force;
use mcts_maxsat::rl::{apply_action, initial_state};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn pct(k: usize, n: usize) -> f64 {
    100.0 * k as f64 / n as f64
}

const CLASSES: [(ProblemClass, bool, usize); 4] = [
    (ProblemClass::MaxSat, false, 0),
    (ProblemClass::WeightedMaxSat, true, 0),
    (ProblemClass::PartialMaxSat, false, 3),
    (ProblemClass::WeightedPartialMaxSat, true, 3),
];

fn generated(class_idx: usize, n: usize, m: usize, seed: u64) -> Formula {
    let (class, weighted, hard_count) = CLASSES[class_idx];
    let f = generate_random(GeneratorSpec {
        num_vars: n,
        num_clauses: m,
        clause_len: 3,
        weighted,
        hard_count,
        seed,
    })
    .expect("generator");
    assert_eq!(f.class(), class, "generator produced the wrong class");
    f
}

// 1 -----------------------------------------------------------------------

fn random_formula(rng: &mut ChaCha8Rng, class: ProblemClass) -> Formula {
    let n = rng.gen_range(1..=15);
    let m = rng.gen_range(1..=60);
    let weighted = matches!(
        class,
        ProblemClass::WeightedMaxSat | ProblemClass::WeightedPartialMaxSat
    );
    let hard_class = class.has_hard_clauses();
    let mut raw = Vec::with_capacity(m);
    for _ in 0..m {
        let len = rng.gen_range(1..=5);
        let lits: Vec<i64> = (0..len)
            .map(|_| {
                let v = rng.gen_range(1..=n as i64);
                if rng.gen_bool(0.5) {
                    -v
                } else {
                    v
                }
            })
            .collect();
        let w = if weighted { rng.gen_range(1..=1000) } else { 1 };
        raw.push((lits, w, hard_class && rng.gen_bool(0.2)));
    }
    if hard_class && !raw.iter().any(|c| c.2) {
        raw[0].2 = true;
    }
    let soft_sum: u64 = raw.iter().filter(|c| !c.2).map(|c| c.1).sum();
    let clauses = raw
        .into_iter()
        .map(|(lits, w, hard)| {
            if hard {
                Clause::hard(&lits, soft_sum + 1)
            } else {
                Clause::weighted(&lits, w)
            }
        })
        .collect();
    let mut f = Formula::new(n, clauses);
    f.declared_class = Some(class);
    f
}

fn clause_walk(f: &Formula, class: ProblemClass, y: &[u8]) -> u64 {
    let mut total = 0;
    for c in &f.clauses {
        let mut sat = false;
        for l in &c.literals {
            let v = y[l.var - 1];
            if (l.negated && v == 0) || (!l.negated && v == 1) {
                sat = true;
                break;
            }
        }
        if sat {
            total += match class {
                ProblemClass::MaxSat => 1,
                ProblemClass::PartialMaxSat if !c.hard => 1,
                _ => c.weight,
            };
        }
    }
    total
}

fn c1_blp_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let mut mismatches = 0;
    for i in 0..200 {
        let class = ProblemClass::ALL[i % 4];
        let f = random_formula(&mut rng, class);
        let p = to_blp(&f, class).expect("reduction");
        for _ in 0..50 {
            let y: Vec<u8> = (0..f.num_vars).map(|_| rng.gen_range(0..=1)).collect();
            let direct = clause_walk(&f, class, &y);
            if p.value(&y) != direct || objective(&f, class, &y).unwrap().value != direct {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && checked == 10_000 && secs < 5.0,
        format!("{checked} formula/assignment pairs, {mismatches} mismatches, {secs:.2}s (limit 5s)"),
    )
}

// 2 -----------------------------------------------------------------------

fn c2_oracle_optimality() -> Outcome {
    let start = Instant::now();
    let instances: Vec<(usize, Formula)> = (0..4)
        .flat_map(|c| (0..50u64).map(move |i| (c, generated(c, 10, 30, split_seed(200 + c as u64, i)))))
        .collect();
    let optima: Vec<u64> = instances
        .par_iter()
        .map(|(_, f)| brute_force(f, f.class(), 20).unwrap().optimum)
        .collect();
    let run = |factor: f64| -> Vec<bool> {
        instances
            .par_iter()
            .zip(&optima)
            .enumerate()
            .map(|(i, ((_, f), &opt))| {
                let cfg = SolverConfig {
                    explore_factor: factor,
                    alpha: 0.9,
                    uct_c: 1.0,
                    seed: i as u64,
                    ..SolverConfig::default()
                };
                solve(f, f.class(), &cfg).unwrap().objective == opt
            })
            .collect()
    };
    let at50 = run(50.0);
    let at7 = run(7.0);
    let secs = start.elapsed().as_secs_f64();
    let per_class = |hits: &[bool]| -> String {
        (0..4)
            .map(|c| {
                let k = hits[c * 50..(c + 1) * 50].iter().filter(|&&h| h).count();
                format!("{} {k}/50", CLASSES[c].0)
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let k50 = at50.iter().filter(|&&h| h).count();
    let k7 = at7.iter().filter(|&&h| h).count();
    outcome(
        k50 == 200 && pct(k7, 200) >= 95.0 && secs < 300.0,
        format!(
            "50m: {k50}/200 [{}]; 7m: {k7}/200 = {:.1}% [{}]; {secs:.1}s (limit 300s)",
            per_class(&at50),
            pct(k7, 200),
            per_class(&at7)
        ),
    )
}

// 3 -----------------------------------------------------------------------

fn c3_uf20_91() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/uf20-91");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    let formulas: Vec<Formula> = files
        .iter()
        .map(|p| parse_cnf(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    let oracle_91 = formulas
        .par_iter()
        .filter(|f| brute_force(f, ProblemClass::MaxSat, 20).unwrap().optimum == 91)
        .count();
    const SEEDS: u64 = 5;
    let rate = |factor: f64| -> usize {
        formulas
            .par_iter()
            .flat_map(|f| (0..SEEDS).into_par_iter().map(move |s| (f, s)))
            .filter(|(f, s)| {
                let cfg = SolverConfig {
                    explore_factor: factor,
                    seed: *s,
                    ..SolverConfig::default()
                };
                solve(f, ProblemClass::MaxSat, &cfg).unwrap().objective == 91
            })
            .count()
    };
    let runs = formulas.len() * SEEDS as usize;
    let k7 = rate(7.0);
    let k50 = rate(50.0);
    outcome(
        formulas.len() >= 20
            && oracle_91 == formulas.len()
            && pct(k7, runs) >= 90.0
            && k50 == runs,
        format!(
            "{} files, oracle optimum 91 on {oracle_91}; objective 91 at 7m in {k7}/{runs} = {:.1}% (need 90%), at 50m in {k50}/{runs} = {:.1}% (need 100%)",
            formulas.len(),
            pct(k7, runs),
            pct(k50, runs)
        ),
    )
}

// 4 -----------------------------------------------------------------------

fn c4_multi_solution() -> Outcome {
    let mut chosen = Vec::new();
    let mut i = 0u64;
    while chosen.len() < 10 {
        let f = generated((i % 4) as usize, 8, 24, split_seed(400, i));
        i += 1;
        let truth = brute_force(&f, f.class(), 20).unwrap();
        if truth.optimal_set.len() >= 2 {
            chosen.push((f, truth));
        }
    }
    let cfg = SolverConfig {
        explore_factor: 50.0,
        ..SolverConfig::default()
    };
    let results: Vec<(bool, usize, usize)> = chosen
        .iter()
        .enumerate()
        .map(|(k, (f, truth))| {
            let report = enumerate(f, f.class(), &SolverConfig { seed: k as u64, ..cfg }, 50).unwrap();
            let subset = report.best_objective == truth.optimum
                && report.distinct_optima.iter().all(|a| truth.contains(a));
            (subset, report.distinct_optima.len(), truth.optimal_set.len())
        })
        .collect();
    let all_subset = results.iter().all(|r| r.0);
    let with_two = results.iter().filter(|r| r.1 >= 2).count();

    let pair = parse_cnf("p cnf 2 1\n1 2 0\n").unwrap();
    let truth = brute_force(&pair, ProblemClass::MaxSat, 20).unwrap();
    let seeds = 200;
    let complete = (0..seeds)
        .into_par_iter()
        .filter(|&s| {
            let r = enumerate(&pair, ProblemClass::MaxSat, &SolverConfig { seed: s, ..cfg }, 60).unwrap();
            r.distinct_optima.len() == 3 && r.distinct_optima.iter().all(|a| truth.contains(a))
        })
        .count();
    let found: Vec<String> = results.iter().map(|r| format!("{}/{}", r.1, r.2)).collect();
    outcome(
        all_subset && with_two >= 9 && truth.optimal_set.len() == 3 && pct(complete, seeds as usize) >= 95.0,
        format!(
            "found/optimal per instance [{}], subset of oracle set: {all_subset}, >=2 found on {with_two}/10; (x1 v x2): all 3 optima in 60 executions on {complete}/{seeds} seeds",
            found.join(" ")
        ),
    )
}

// 5 -----------------------------------------------------------------------

fn tree_with_rewards(rewards: &[Vec<f64>]) -> SearchTree {
    let f = parse_cnf("p cnf 3 1\n1 2 3 0\n").unwrap();
    let (root, actions) = initial_state(&f, ProblemClass::MaxSat).unwrap();
    let mut tree = SearchTree::new(root.clone());
    for (a, rs) in actions.iter().zip(rewards) {
        let id = tree.add_child(SearchTree::ROOT, apply_action(&root, *a).unwrap(), *a);
        for &r in rs {
            backup(&mut tree, id, r);
        }
    }
    tree
}

fn frequencies(tree: &SearchTree, draws: usize, mut pick: impl FnMut(&mut ChaCha8Rng) -> usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = vec![0usize; tree.children(SearchTree::ROOT).len()];
    for _ in 0..draws {
        let id = pick(&mut rng);
        let k = tree.children(SearchTree::ROOT).iter().position(|&c| c == id).unwrap();
        counts[k] += 1;
    }
    counts.iter().map(|&c| c as f64 / draws as f64).collect()
}

fn c5_selection_rules() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut eligibility_ok = true;
    for _ in 0..200 {
        let rewards: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..4) as f64).collect())
            .collect();
        let tree = tree_with_rewards(&rewards);
        let children = tree.children(SearchTree::ROOT).to_vec();
        for normalize in [true, false] {
            let all = exploration_candidates(&tree, SearchTree::ROOT, 0.0, 1.0, normalize).unwrap();
            let scores = uct_scores(&tree, SearchTree::ROOT, 1.0, normalize).unwrap();
            let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let argmax: Vec<_> = children
                .iter()
                .zip(&scores)
                .filter(|(_, &s)| s == best)
                .map(|(&c, _)| c)
                .collect();
            let top = exploration_candidates(&tree, SearchTree::ROOT, 1.0, 1.0, normalize).unwrap();
            eligibility_ok &= all == children && top == argmax;
        }
    }

    let draws = 10_000;
    let mut worst: f64 = 0.0;
    let mut check = |freqs: &[f64], expected: &[f64]| {
        for (f, e) in freqs.iter().zip(expected) {
            worst = worst.max((f - e).abs());
        }
    };
    let cfg = SolverConfig::default();
    // six identical children: every rule sees a six-way tie
    let even = tree_with_rewards(&vec![vec![1.0, 2.0]; 6]);
    check(
        &frequencies(&even, draws, |r| select_exploration_child(&even, SearchTree::ROOT, &cfg, r).unwrap()),
        &[1.0 / 6.0; 6],
    );
    check(
        &frequencies(&even, draws, |r| select_best_child(&even, SearchTree::ROOT, ExploitRule::MeanQ, r).unwrap()),
        &[1.0 / 6.0; 6],
    );
    // two leaders among six: alpha = 1 keeps exactly those two
    let split = tree_with_rewards(&[
        vec![3.0, 3.0],
        vec![0.0, 1.0],
        vec![3.0, 3.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![0.0, 0.0],
    ]);
    let greedy = SolverConfig { alpha: 1.0, ..cfg };
    check(
        &frequencies(&split, draws, |r| select_exploration_child(&split, SearchTree::ROOT, &greedy, r).unwrap()),
        &[0.5, 0.0, 0.5, 0.0, 0.0, 0.0],
    );
    check(
        &frequencies(&split, draws, |r| select_best_child(&split, SearchTree::ROOT, ExploitRule::Significance, r).unwrap()),
        &[0.5, 0.0, 0.5, 0.0, 0.0, 0.0],
    );
    outcome(
        eligibility_ok && worst <= 0.02,
        format!(
            "alpha=0 set = all children and alpha=1 set = UCT argmax on 200 trees: {eligibility_ok}; largest tie-break deviation over {draws} draws {worst:.4} (limit 0.02)"
        ),
    )
}

// 6 -----------------------------------------------------------------------

fn c6_backup_accounting() -> Outcome {
    let mut levels = 0;
    let mut violations = Vec::new();
    for i in 0..20u64 {
        let f = generated((i % 4) as usize, 8, 24, split_seed(600, i));
        let total = to_blp(&f, f.class()).unwrap().total_weight() as f64;
        let cfg = SolverConfig {
            seed: i,
            ..SolverConfig::default()
        };
        let mut budgets = Vec::new();
        let result = solve_with_observer(&f, f.class(), &cfg, |level, tree| {
            levels += 1;
            let root = tree.root();
            let kids = tree.children(SearchTree::ROOT);
            let sum: u64 = kids.iter().map(|&c| tree.node(c).visits).sum();
            if root.visits != sum {
                violations.push(format!("instance {i} level {level}: root {} != children {sum}", root.visits));
            }
            budgets.push(root.visits);
            for id in 0..tree.len() {
                let node = tree.node(id);
                let mean = node.mean();
                if node.visits == 0 || mean < node.r_min - 1e-9 || mean > node.r_max + 1e-9 || node.r_max > total {
                    violations.push(format!("instance {i} level {level} node {id}: mean {mean} outside [{}, {}]", node.r_min, node.r_max));
                }
            }
        })
        .unwrap();
        if budgets != result.stats.per_level {
            violations.push(format!("instance {i}: root visits {budgets:?} differ from budgets"));
        }
    }
    outcome(
        violations.is_empty(),
        if violations.is_empty() {
            format!("20 instances, {levels} level roots: visits = sum of child visits, every mean within [min, max]")
        } else {
            format!("{} violations, first: {}", violations.len(), violations[0])
        },
    )
}

// 7 -----------------------------------------------------------------------

fn c7_significance() -> Outcome {
    let tree = tree_with_rewards(&[vec![6.0, 4.0], vec![9.0, -5.0]]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sig_pick = select_best_child(&tree, SearchTree::ROOT, ExploitRule::Significance, &mut rng).unwrap();
    let mean_pick = select_best_child(&tree, SearchTree::ROOT, ExploitRule::MeanQ, &mut rng).unwrap();
    let kids = tree.children(SearchTree::ROOT);
    let checks = [
        ("rank (5,1,3) = (3,1,2)", rank(&[5.0, 1.0, 3.0]) == vec![3, 1, 2]),
        ("rank (2,2) = (1,2)", rank(&[2.0, 2.0]) == vec![1, 2]),
        ("rank singleton", rank(&[4.0]) == vec![1]),
        ("agreeing ranks keep means", significance(&[1.0, 2.0], &[3.0, 4.0]).unwrap() == vec![1.0, 2.0]),
        ("disagreeing ranks give maxes", significance(&[1.0, 2.0], &[4.0, 3.0]).unwrap() == vec![4.0, 3.0]),
        ("single group keeps mean", significance(&[2.5], &[7.0]).unwrap() == vec![2.5]),
        ("length mismatch rejected", significance(&[1.0], &[1.0, 2.0]).is_err()),
        ("projection yields maxes", projected_significance(&[5.0, 2.0], &[6.0, 9.0]).unwrap() == vec![6.0, 9.0]),
        ("means (5,2) maxes (6,9) select child 2", sig_pick == kids[1] && mean_pick == kids[0]),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} exact checks", checks.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    )
}

// 8 -----------------------------------------------------------------------

fn c8_theory_budgets() -> Outcome {
    let base = theory_budgets(2, 0.05, 0.05, 3).unwrap();
    let single = theory_budgets(2, 0.05, 0.05, 1).unwrap();
    let epsilons = [0.5, 0.2, 0.1, 0.05, 0.01, 0.001];
    let mut monotone = true;
    for n in 1..=16 {
        for (k, &eps) in epsilons.iter().enumerate() {
            let b = theory_budgets(n, eps, eps, 4).unwrap();
            if n > 1 {
                let prev = theory_budgets(n - 1, eps, eps, 4).unwrap();
                monotone &= b.explore_bound >= prev.explore_bound
                    && b.child_visit_bound >= prev.child_visit_bound;
            }
            if k > 0 {
                let looser = theory_budgets(n, epsilons[k - 1], epsilons[k - 1], 4).unwrap();
                monotone &= b.explore_bound >= looser.explore_bound
                    && b.child_visit_bound >= looser.child_visit_bound
                    && b.execution_bound >= looser.execution_bound;
            }
        }
    }
    let strict = theory_budgets(10, 0.05, 0.05, 2).unwrap().explore_bound
        > theory_budgets(9, 0.05, 0.05, 2).unwrap().explore_bound;
    outcome(
        base.explore_bound == 11 && base.execution_bound == 11 && single.execution_bound == 1 && monotone && strict,
        format!(
            "explore_bound(n=2, eps=0.05) = {}, execution_bound(S=3) = {}, S=1 -> {}; monotone over n<=16 x 6 epsilons: {monotone}",
            base.explore_bound, base.execution_bound, single.execution_bound
        ),
    )
}

// 9 -----------------------------------------------------------------------

fn parse_rows(body: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

/// Half-size versions of the six benchmark families used for the reward and
/// alpha comparisons: three random 3-SAT near the threshold, partial MaxSAT with
/// one hard clause in eight, dense MaxSAT, and weighted partial MaxSAT.
const REPRESENTATIVE: [(usize, usize, bool, usize); 6] = [
    (20, 87, false, 0),
    (20, 86, false, 0),
    (25, 108, false, 0),
    (20, 160, false, 20),
    (14, 180, false, 0),
    (20, 160, true, 20),
];

fn c9_ablation() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    for (i, &(num_vars, num_clauses, weighted, hard_count)) in REPRESENTATIVE.iter().enumerate() {
        let f = generate_random(GeneratorSpec {
            num_vars,
            num_clauses,
            clause_len: 3,
            weighted,
            hard_count,
            seed: split_seed(900, i as u64),
        })
        .unwrap();
        std::fs::write(dir.path().join(format!("rep-{i}.wcnf")), write_dimacs(&f)).unwrap();
    }
    let spec = |mode| RunSpec {
        inputs: vec![dir.path().to_path_buf()],
        mode,
        format: Format::Csv,
        repeats: 20,
        no_timing: true,
        ..RunSpec::default()
    };
    let ablation = bench::run(&spec(Mode::Ablation)).unwrap();
    let again = bench::run(&spec(Mode::Ablation)).unwrap();
    let grid = bench::run(&spec(Mode::AlphaGrid)).unwrap();
    let grid_again = bench::run(&spec(Mode::AlphaGrid)).unwrap();

    let (ah, arows) = parse_rows(&ablation.body);
    let (gh, grows) = parse_rows(&grid.body);
    let schema = ah
        == ["instance", "reward", "explore_factor", "repeats", "mean_objective", "best_objective", "mean_wall_ms"]
        && gh == ["instance", "alpha", "repeats", "mean_objective", "mean_normalized", "mean_wall_ms"]
        && arows.len() == 24
        && grows.len() == 66
        && arows.iter().all(|r| r[3] == "20")
        && grows.iter().all(|r| r[2] == "20")
        && arows.iter().map(|r| r[1].as_str()).collect::<BTreeSet<_>>()
            == ["mixed", "r1", "r2", "terminal"].into_iter().collect()
        && ablation.exit_code == 0
        && grid.exit_code == 0;
    let deterministic = ablation.body == again.body && grid.body == grid_again.body;

    let mut terminal_wins = 0;
    let mut margins = Vec::new();
    for chunk in arows.chunks(4) {
        let mean = |kind: &str| -> f64 {
            chunk.iter().find(|r| r[1] == kind).unwrap()[4].parse().unwrap()
        };
        let t = mean("terminal");
        let others = ["r1", "r2", "mixed"].map(mean);
        if others.iter().all(|&o| t >= o) {
            terminal_wins += 1;
        }
        margins.push(format!("{:+.1}", t - others.iter().copied().fold(f64::NEG_INFINITY, f64::max)));
    }
    outcome(
        schema && deterministic && terminal_wins >= 4,
        format!(
            "24 ablation rows and 66 alpha rows with 20 repeats: {schema}; repeat runs byte-identical: {deterministic}; terminal mean >= every variant on {terminal_wins}/6 (margins {})",
            margins.join(" ")
        ),
    )
}

// 10 ----------------------------------------------------------------------

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..3u64 {
        let f = generated(i as usize, 9, 27, split_seed(1000, i));
        std::fs::write(dir.path().join(format!("d-{i}.wcnf")), write_dimacs(&f)).unwrap();
    }
    let mut identical = Vec::new();
    for mode in [Mode::Solve, Mode::Enumerate, Mode::OracleCheck, Mode::Ablation, Mode::AlphaGrid] {
        for format in [Format::Json, Format::Csv] {
            let spec = RunSpec {
                inputs: vec![dir.path().to_path_buf()],
                generate: Some(GeneratedBatch {
                    spec: GeneratorSpec {
                        num_vars: 7,
                        num_clauses: 20,
                        clause_len: 3,
                        weighted: true,
                        hard_count: 2,
                        seed: 11,
                    },
                    count: 2,
                }),
                mode,
                format,
                repeats: 3,
                executions: 5,
                no_timing: true,
                config: SolverConfig {
                    seed: 42,
                    ..SolverConfig::default()
                },
                ..RunSpec::default()
            };
            let a = bench::run(&spec).unwrap();
            let b = bench::run(&spec).unwrap();
            identical.push((format!("{mode:?}/{format:?}"), a.body == b.body && !a.body.is_empty()));
        }
    }
    let f = generated(3, 10, 30, 77);
    let cfg = SolverConfig {
        seed: 3,
        ..SolverConfig::default()
    };
    let r1 = solve(&f, f.class(), &cfg).unwrap();
    let r2 = solve(&f, f.class(), &cfg).unwrap();
    let same_solve = r1.assignment == r2.assignment && r1.objective == r2.objective && r1.stats.per_level == r2.stats.per_level;
    let bad: Vec<_> = identical.iter().filter(|x| !x.1).map(|x| x.0.clone()).collect();
    outcome(
        bad.is_empty() && same_solve,
        if bad.is_empty() {
            format!("{} mode/format pairs byte-identical across repeated runs; repeated solve identical: {same_solve}", identical.len())
        } else {
            format!("differing bodies: {}", bad.join(", "))
        },
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("BLP equivalence", c1_blp_equivalence),
        ("oracle optimality", c2_oracle_optimality),
        ("uf20-91 spot check", c3_uf20_91),
        ("multi-solution completeness", c4_multi_solution),
        ("selection-rule invariants", c5_selection_rules),
        ("backup accounting", c6_backup_accounting),
        ("significance operator", c7_significance),
        ("theory budgets", c8_theory_budgets),
        ("ablation harness", c9_ablation),
        ("determinism", c10_determinism),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();

    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !only.is_empty() && !only.contains(&number) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} criterion {number:>2} {name}: {} [{:.1}s]",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

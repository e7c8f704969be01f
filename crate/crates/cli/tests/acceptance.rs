//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::fs;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use forestfas::assignment::{decode, encode, satisfies, satisfying_assignments};
use forestfas::io::{write_dimacs, write_tournament};
use forestfas::magic::{enumerate_forest_orderings, verify_magic, MAGIC_MATRIX};
use forestfas::reduction::{reduce, ArcLayer, Part, RoleIndex, VertexRole};
use forestfas::solver::{
    dichromatic_number, dichromatic_number_by_partition, exhaustive_oracle, find_class_ordering,
    ClassPredicate,
};
use forestfas::{
    backedge_graph, forest_to_tree, is_forest_ordering, is_tree_ordering, transitive, CnfInstance,
    Literal, Tournament,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Pair `(u, v)`, `u < v`, points forward iff bit `u(2n-u-1)/2 + v-u-1` of `code` is set.
fn tournament_from_code(n: usize, code: u64) -> Tournament {
    Tournament::from_fn(n, |u, v| {
        code >> (u * (2 * n - u - 1) / 2 + v - u - 1) & 1 == 1
    })
}

fn random_tournament(rng: &mut impl Rng, n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.gen())
}

/// The shared instance set of criteria 2 and 3.
fn instances() -> Vec<CnfInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=6);
            let k = rng.gen_range(1..=10);
            let clauses = (0..k)
                .map(|_| {
                    [(); 3].map(|_| Literal {
                        variable: rng.gen_range(1..=n),
                        negated: rng.gen(),
                    })
                })
                .collect();
            CnfInstance::new(n, clauses).unwrap()
        })
        .collect()
}

fn magic_gate() -> Verdict {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_forestfas"))
        .arg("magic-verify")
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let report = verify_magic();
    let unique = report.forest_orderings.len() == 1 && report.forest_orderings[0].is_identity();
    let passed = out.status.code() == Some(0)
        && text.contains("permutations checked: 40320\n")
        && text.contains("forest-orderings: 1\n  0 1 2 3 4 5 6 7\n")
        && text.contains("backedge edges: 7 (tree: true)")
        && report.passed
        && report.total_permutations == 40320
        && unique
        && report.tree_edges == Some(7)
        && report.checker_disagreements == 0
        && elapsed < Duration::from_secs(5);
    verdict(
        passed,
        format!(
            "{} permutations, {} forest-ordering(s), identity: {unique}, backedge tree edges: {:?}, {:.2}s",
            report.total_permutations,
            report.forest_count,
            report.tree_edges,
            elapsed.as_secs_f64()
        ),
    )
}

fn round_trip(instances: &[CnfInstance]) -> Verdict {
    let start = Instant::now();
    let (mut sat, mut models, mut failures) = (0, 0, 0);
    for inst in instances {
        let all = satisfying_assignments(inst).unwrap();
        if all.is_empty() {
            continue;
        }
        sat += 1;
        let r = reduce(inst).unwrap();
        for nu in &all {
            models += 1;
            let ok = match encode(&r, nu) {
                Ok(ord) => {
                    is_forest_ordering(r.tournament(), &ord).unwrap()
                        && decode(&r, &ord).as_ref() == Ok(nu)
                        && satisfies(inst, nu)
                }
                Err(_) => false,
            };
            if !ok {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && sat > 0 && elapsed < Duration::from_secs(60),
        format!(
            "{} instances, {sat} satisfiable, {models} assignments encoded and decoded, {failures} failures, {:.1}s",
            instances.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn layer_of(roles: &RoleIndex, u: usize, v: usize) -> Option<ArcLayer> {
    use VertexRole::*;
    match (roles.role(u), roles.role(v)) {
        (Magic { owner: x, .. }, Magic { owner: y, .. }) if x == y => Some(ArcLayer::MagicTree),
        (Anchor(x), GadgetY { owner: y, .. }) | (GadgetY { owner: y, .. }, Anchor(x)) if x == y => {
            Some(ArcLayer::YStar)
        }
        (
            GadgetN {
                owner: x,
                part: Part::Clause,
                ..
            },
            GadgetN {
                owner: y,
                part: Part::Clause,
                ..
            },
        ) if x != y => Some(ArcLayer::Clause),
        (GadgetN { owner: x, .. }, GadgetN { owner: y, .. })
        | (GadgetY { owner: x, .. }, GadgetY { owner: y, .. })
            if x != y =>
        {
            Some(ArcLayer::Matching)
        }
        _ => None,
    }
}

fn size_formula(instances: &[CnfInstance]) -> Verdict {
    let mut failures = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let (n, k) = (inst.num_vars(), inst.num_clauses());
        let r = reduce(inst).unwrap();
        let g = backedge_graph(r.tournament(), r.star_order()).unwrap();
        let mut counts: HashMap<Option<ArcLayer>, usize> = HashMap::new();
        for &(u, v) in g.edges() {
            *counts.entry(layer_of(r.roles(), u, v)).or_insert(0) += 1;
        }
        let expected = HashMap::from([
            (Some(ArcLayer::MagicTree), 7 * (2 * n + 3 * k)),
            (Some(ArcLayer::YStar), 10 * n + 30 * k),
            (Some(ArcLayer::Matching), 7 * n + 21 * k),
            (Some(ArcLayer::Clause), 3 * k),
        ]);
        if r.tournament().len() != 32 * n + 75 * k || counts != expected {
            failures.push(i);
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} instances: |V| = 32n + 75k and layers (7(2n+3k) magic, 10n+30k star, 7n+21k matching, 3k clause), mismatches: {failures:?}",
            instances.len()
        ),
    )
}

fn pinned_magic() -> Verdict {
    let start = Instant::now();
    let t = Tournament::from_fn(10, |u, v| match (u, v) {
        (0, 9) => false,
        (0, _) | (_, 9) => true,
        _ => MAGIC_MATRIX[u - 1][v - 1],
    });
    let forests = enumerate_forest_orderings(&t, usize::MAX).unwrap();
    let violating = forests.iter().filter(|o| o.precedes(9, 0)).count();
    let elapsed = start.elapsed();
    verdict(
        violating == 0 && elapsed < Duration::from_secs(600),
        format!(
            "3628800 orderings scanned, {} forest-orderings, {violating} with b before a, {:.1}s",
            forests.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Tournaments of criteria 5 and 6.
fn solver_corpus() -> Vec<Tournament> {
    let mut out: Vec<Tournament> = (0..1u64 << pair_count(6))
        .map(|c| tournament_from_code(6, c))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    out.extend((0..1000).map(|_| random_tournament(&mut rng, 8)));
    out
}

fn solver_vs_oracle(corpus: &[Tournament]) -> Verdict {
    let start = Instant::now();
    let (mut yes, mut disagreements, mut bad_witnesses) = (0, 0, 0);
    for t in corpus {
        let fast = find_class_ordering(t, ClassPredicate::Forest);
        let slow = exhaustive_oracle(t, ClassPredicate::Forest).unwrap();
        if fast.decision != slow.decision || fast.witness != slow.witness {
            disagreements += 1;
        }
        if let Some(w) = &fast.witness {
            yes += 1;
            if !is_forest_ordering(t, w).unwrap() {
                bad_witnesses += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        disagreements == 0 && bad_witnesses == 0 && elapsed < Duration::from_secs(600),
        format!(
            "{} tournaments (32768 on 6 vertices, 1000 on 8), {yes} yes, {disagreements} disagreements, {bad_witnesses} invalid witnesses, {:.1}s",
            corpus.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn forest_tree_equivalence(corpus: &[Tournament]) -> Verdict {
    let (mut converted, mut failures) = (0, 0);
    for t in corpus {
        let forest = find_class_ordering(t, ClassPredicate::Forest);
        let tree = find_class_ordering(t, ClassPredicate::Tree);
        if forest.decision != tree.decision {
            failures += 1;
        }
        if let Some(w) = &forest.witness {
            converted += 1;
            if !is_tree_ordering(t, &forest_to_tree(t, w).unwrap()).unwrap() {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("{converted} forest witnesses converted to tree-orderings, {failures} failures"),
    )
}

fn dichromatic() -> Verdict {
    let mut checked = 0;
    let mut mismatches = 0;
    for n in 0..=6 {
        for code in 0..1u64 << pair_count(n) {
            let t = tournament_from_code(n, code);
            checked += 1;
            if dichromatic_number(&t).unwrap() != dichromatic_number_by_partition(&t).unwrap() {
                mismatches += 1;
            }
        }
    }
    let dic_transitive: Vec<usize> = (1..=8)
        .map(|n| dichromatic_number(&transitive(n).0).unwrap())
        .collect();
    let cycle = Tournament::from_fn(3, |u, v| !(u == 0 && v == 2));
    let dic_cycle = dichromatic_number(&cycle).unwrap();
    verdict(
        mismatches == 0 && dic_transitive.iter().all(|&d| d == 1) && dic_cycle == 2,
        format!(
            "{checked} tournaments on at most 6 vertices, {mismatches} mismatches, dic(transitive 1..8) = {dic_transitive:?}, dic(3-cycle) = {dic_cycle}"
        ),
    )
}

fn run_cli(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forestfas"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .unwrap()
}

fn determinism() -> Verdict {
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let inst =
        CnfInstance::from_dimacs(4, &[[1, -2, 3], [-1, 2, 4], [2, -3, -4], [-1, -2, -4]]).unwrap();
    fs::write(p("f.cnf"), write_dimacs(&inst)).unwrap();
    fs::write(p("f.asg"), "1 1\n2 1\n3 0\n4 0\n").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let small = random_tournament(&mut rng, 9);
    fs::write(p("s.tournament"), write_tournament(&small, None)).unwrap();

    let read = |path: &str| fs::read(path).unwrap();
    let mut runs: Vec<Vec<Vec<u8>>> = Vec::new();
    for threads in ["1", "1", "1", "4", "4", "4"] {
        let mut outputs = Vec::new();
        let (t, o) = (p("t"), p("o"));
        let reduce = run_cli(
            &[
                "reduce",
                "--cnf",
                &p("f.cnf"),
                "--out",
                &t,
                "--emit-roles",
                &p("r"),
            ],
            threads,
        );
        outputs.push(vec![reduce.status.code().unwrap_or(-1) as u8]);
        outputs.push(read(&t));
        outputs.push(read(&p("r")));
        let encode = run_cli(
            &[
                "encode",
                "--cnf",
                &p("f.cnf"),
                "--assignment",
                &p("f.asg"),
                "--out",
                &o,
            ],
            threads,
        );
        outputs.push(vec![encode.status.code().unwrap_or(-1) as u8]);
        outputs.push(read(&o));
        for workers in ["1", "4", "0"] {
            for class in ["forest", "tree", "bipartite", "clique2"] {
                let w = p("w");
                let _ = fs::remove_file(&w);
                let solve = run_cli(
                    &[
                        "solve",
                        "--tournament",
                        &p("s.tournament"),
                        "--class",
                        class,
                        "--workers",
                        workers,
                        "--witness",
                        &w,
                    ],
                    threads,
                );
                outputs.push(solve.stdout);
                outputs.push(vec![solve.status.code().unwrap_or(-1) as u8]);
                outputs.push(fs::read(&w).unwrap_or_default());
            }
        }
        runs.push(outputs);
    }
    // Solve outputs for different --workers must also coincide within a run.
    let solve_blocks_agree = runs.iter().all(|r| {
        let solves = &r[5..];
        let per_worker = solves.len() / 3;
        solves[..per_worker] == solves[per_worker..2 * per_worker]
            && solves[..per_worker] == solves[2 * per_worker..]
    });
    let identical = runs.windows(2).all(|w| w[0] == w[1]);
    let reduce_ok = runs[0][0] == [0] && runs[0][3] == [0];
    verdict(
        identical && solve_blocks_agree && reduce_ok,
        format!(
            "reduce, encode and solve repeated 3 times with 1 and 4 pool threads, solve with 1, 4 and all workers: identical {identical}, worker-independent {solve_blocks_agree}"
        ),
    )
}

fn main() {
    let instances = instances();
    let corpus = solver_corpus();
    let criteria: Vec<(&str, Check)> = vec![
        (
            "magic tournament has a unique forest-ordering",
            Box::new(magic_gate),
        ),
        (
            "encode/decode round trip",
            Box::new(|| round_trip(&instances)),
        ),
        (
            "size formula and backedge layers",
            Box::new(|| size_formula(&instances)),
        ),
        (
            "pinned magic copy forces its dominator first",
            Box::new(pinned_magic),
        ),
        (
            "solver agrees with exhaustive oracle",
            Box::new(|| solver_vs_oracle(&corpus)),
        ),
        (
            "forest/tree equivalence",
            Box::new(|| forest_tree_equivalence(&corpus)),
        ),
        ("dichromatic number cross-check", Box::new(dichromatic)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {} {}: {} ({})",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

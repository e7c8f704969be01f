mod common;

use std::collections::HashSet;
use std::ops::ControlFlow;

use common::random_instance;
use forestfas::assignment::{
    check_coherence, decode, encode, peeling_certificate, satisfies, satisfying_assignments,
    side_labels, Assignment, AssignmentError, Side,
};
use forestfas::magic::{enumerate_forest_orderings, MAGIC_MATRIX};
use forestfas::permutations::for_each_permutation;
use forestfas::reduction::{owners, reduce, Owner, Part, ReducedTournament};
use forestfas::{backedge_graph, is_forest_ordering, CnfInstance, Ordering, Tournament};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn owner_true(r: &ReducedTournament, nu: &Assignment, owner: Owner) -> bool {
    let lit = r.literal_of(owner);
    lit.eval(nu.value(lit.variable))
}

/// Vertices left for the last peeling stage: false literal vertices and the
/// clause parts of their gadgets.
fn expected_final_stage(r: &ReducedTournament, nu: &Assignment) -> HashSet<usize> {
    let mut out = HashSet::new();
    for b in r.blocks() {
        if matches!(b.owner, Owner::Lit(_)) && !owner_true(r, nu, b.owner) {
            out.insert(b.anchor);
            out.extend(b.n_part(Part::Clause).unwrap());
        }
    }
    out
}

fn check_encoded(r: &ReducedTournament, nu: &Assignment, ord: &Ordering) {
    let t = r.tournament();
    assert!(is_forest_ordering(t, ord).unwrap());
    assert_eq!(&decode(r, ord).unwrap(), nu);

    let labels = side_labels(r, ord).unwrap();
    assert!(check_coherence(&labels, r.instance()));
    for b in r.blocks() {
        let expected = if owner_true(r, nu, b.owner) {
            Side::L
        } else {
            Side::R
        };
        assert_eq!(labels.get(b.owner), Some(expected));
    }

    // Gadget halves of owners keep the owners' relative order.
    for pair in r.blocks().windows(2) {
        let (x, z) = (&pair[0], &pair[1]);
        let last = |vs: &[usize]| vs.iter().map(|&v| ord.position(v)).max().unwrap();
        let first = |vs: &[usize]| vs.iter().map(|&v| ord.position(v)).min().unwrap();
        assert!(last(&x.n_vertices()) < first(&z.n_vertices()));
        assert!(last(&x.y_vertices()) < first(&z.y_vertices()));
    }

    // B_w ∪ N_w induces a tree in the backedge graph for every R-labelled w.
    let g = backedge_graph(t, ord).unwrap();
    for b in r.blocks() {
        if labels.get(b.owner) == Some(Side::R) {
            let mut vs = vec![b.anchor];
            vs.extend(b.magic);
            vs.extend(b.n_vertices());
            assert!(g.induced(&vs).is_tree(), "{}", b.owner);
        }
    }

    let cert = peeling_certificate(r, ord).unwrap();
    assert!(cert.replays_on(r, ord));
    assert_eq!(cert.len(), t.len());
    let last: Vec<usize> = cert.stages[4].steps.iter().map(|s| s.vertex).collect();
    assert_eq!(
        last.iter().copied().collect::<HashSet<_>>(),
        expected_final_stage(r, nu)
    );
    let rest = g.induced(&last);
    let comps = rest.components();
    for c in 0..last.len() {
        let members: Vec<usize> = (0..last.len()).filter(|&v| comps[v] == comps[c]).collect();
        assert!(members.len() <= 6);
        assert!(members.iter().all(|&v| rest.degree(v) <= 2));
        assert!(rest.induced(&members).is_tree());
    }
}

#[test]
fn round_trip_on_random_satisfiable_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut satisfiable = 0;
    for _ in 0..40 {
        let inst = random_instance(&mut rng, 6, 10);
        let models = satisfying_assignments(&inst).unwrap();
        if models.is_empty() {
            continue;
        }
        satisfiable += 1;
        let r = reduce(&inst).unwrap();
        let pick = rng.gen_range(0..models.len());
        for nu in [&models[0], &models[pick]] {
            let ord = encode(&r, nu).unwrap();
            check_encoded(&r, nu, &ord);
        }
    }
    assert!(satisfiable >= 20);
}

#[test]
fn every_model_of_a_small_instance_round_trips() {
    let inst = CnfInstance::from_dimacs(3, &[[1, -2, 3], [-1, 2, 3], [1, 2, -3]]).unwrap();
    let r = reduce(&inst).unwrap();
    let models = satisfying_assignments(&inst).unwrap();
    assert_eq!(models.len(), 5);
    for nu in &models {
        check_encoded(&r, nu, &encode(&r, nu).unwrap());
    }
}

#[test]
fn sweep_agrees_with_short_circuit_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let inst = random_instance(&mut rng, 10, 12);
        let n = inst.num_vars();
        let models = satisfying_assignments(&inst).unwrap();
        let mut expected = Vec::new();
        for m in 0..1u32 << n {
            let value = |var: usize| m >> (var - 1) & 1 == 1;
            let ok = inst
                .clauses()
                .iter()
                .all(|c| c.iter().any(|l| l.eval(value(l.variable))));
            if ok {
                expected.push(Assignment::from_fn(n, value));
            }
        }
        assert_eq!(models, expected);
        assert!(models.iter().all(|nu| satisfies(&inst, nu)));
    }
}

#[test]
fn encode_rejects_non_models() {
    let inst = CnfInstance::from_dimacs(2, &[[1, 1, 2], [-1, -1, -1]]).unwrap();
    let r = reduce(&inst).unwrap();
    let bad = Assignment::new(vec![false, false]);
    assert_eq!(
        encode(&r, &bad),
        Err(AssignmentError::NotSatisfying { clause: 1 })
    );
    assert!(matches!(
        encode(&r, &Assignment::new(vec![true])),
        Err(AssignmentError::VariableCount { .. })
    ));
    let good = Assignment::new(vec![false, true]);
    check_encoded(&r, &good, &encode(&r, &good).unwrap());
}

#[test]
fn unsatisfiable_instance_has_no_model_to_encode() {
    let inst = CnfInstance::from_dimacs(1, &[[1, 1, 1], [-1, -1, -1]]).unwrap();
    assert!(satisfying_assignments(&inst).unwrap().is_empty());
    let r = reduce(&inst).unwrap();
    for v in [false, true] {
        assert!(encode(&r, &Assignment::new(vec![v])).is_err());
    }
}

#[test]
fn decode_rejects_tampered_orderings() {
    let inst = CnfInstance::from_dimacs(2, &[[1, -2, 2]]).unwrap();
    let r = reduce(&inst).unwrap();
    let nu = Assignment::new(vec![true, true]);
    let ord = encode(&r, &nu).unwrap();
    // Moving a true variable vertex behind its ℓ makes the ordering a non-forest.
    let v1 = r.block(Owner::Var {
        var: 1,
        positive: true,
    });
    let mut seq: Vec<usize> = ord
        .sequence()
        .iter()
        .copied()
        .filter(|&v| v != v1.anchor)
        .collect();
    let at = seq
        .iter()
        .position(|&v| v == *v1.y_vertices().last().unwrap())
        .unwrap();
    seq.insert(at + 1, v1.anchor);
    let moved = Ordering::new(seq).unwrap();
    assert_eq!(decode(&r, &moved), Err(AssignmentError::NotForest));
    assert_eq!(decode(&r, r.star_order()), Err(AssignmentError::NotForest));
}

#[test]
fn star_order_is_coherent_only_after_encoding() {
    let inst = CnfInstance::from_dimacs(2, &[[1, 2, -1]]).unwrap();
    let r = reduce(&inst).unwrap();
    let labels = side_labels(&r, r.star_order()).unwrap();
    assert!(owners(&inst)
        .iter()
        .all(|&o| labels.get(o) == Some(Side::L)));
    assert!(!check_coherence(&labels, &inst));
}

/// `{a} ∪ M ∪ {b}` with `a => M => b`, `b -> a` and `M` a magic copy.
fn pinned_magic() -> Tournament {
    Tournament::from_fn(10, |u, v| match (u, v) {
        (0, 9) => false,
        (0, _) | (_, 9) => true,
        _ => MAGIC_MATRIX[u - 1][v - 1],
    })
}

#[test]
fn magic_copy_forces_its_dominator_first() {
    let t = pinned_magic();
    let forests = enumerate_forest_orderings(&t, usize::MAX).unwrap();
    assert!(!forests.is_empty());
    assert!(forests.iter().all(|o| o.precedes(0, 9)));
    // Sanity check of the enumerator on a sample of orderings with b ≺ a.
    let mut seen = 0;
    let _ = for_each_permutation(10, |seq| {
        if seq[0] == 9 {
            let ord = Ordering::new(seq.to_vec()).unwrap();
            assert!(!is_forest_ordering(&t, &ord).unwrap());
            seen += 1;
        }
        if seen == 20_000 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    assert_eq!(seen, 20_000);
}

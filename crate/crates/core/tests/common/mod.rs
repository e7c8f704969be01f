#![allow(dead_code)]

use forestfas::reduction::{ArcLayer, Part, RoleIndex, VertexRole};
use forestfas::{CnfInstance, Literal, Ordering, Tournament, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

fn pair_index(n: usize, u: usize, v: usize) -> usize {
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// The tournament whose pair `(u, v)`, `u < v`, points forward iff the
/// corresponding bit of `code` is set.
pub fn tournament_from_code(n: usize, code: u64) -> Tournament {
    Tournament::from_fn(n, |u, v| code >> pair_index(n, u, v) & 1 == 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub fn random_tournament(rng: &mut impl Rng, n: usize) -> Tournament {
    Tournament::from_fn(n, |_, _| rng.gen())
}

pub fn random_ordering(rng: &mut impl Rng, n: usize) -> Ordering {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    Ordering::new(seq).unwrap()
}

pub fn random_instance(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfInstance {
    let n = rng.gen_range(1..=max_vars);
    let k = rng.gen_range(1..=max_clauses);
    let mut lit = || Literal {
        variable: rng.gen_range(1..=n),
        negated: rng.gen(),
    };
    let clauses = (0..k).map(|_| [lit(), lit(), lit()]).collect();
    CnfInstance::new(n, clauses).unwrap()
}

/// Classifies a back-edge of the star order from the roles of its endpoints
/// alone, without looking at the construction records.
pub fn classify(roles: &RoleIndex, u: VertexId, v: VertexId) -> Option<ArcLayer> {
    use VertexRole::*;
    let (a, b) = (roles.role(u), roles.role(v));
    match (a, b) {
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

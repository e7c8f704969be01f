//! The eight-vertex tournament with a unique forest-ordering, and the
//! exhaustive check that proves the uniqueness claim.
//!
//! Vertices are labelled `a..h` as `0..7`; the identity order is the unique
//! forest-ordering and vertex `0` is the one the reduction calls `ℓ_x`.

use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::backedge::{backedge_graph, sequence_is_forest};
use crate::dsu::DisjointSets;
use crate::permutations::{factorial, for_each_permutation_from, guard, SizeGuardError};
use crate::tournament::{Ordering, Tournament};

/// Upper bound on the tournament size accepted by [`enumerate_forest_orderings`].
pub const MAX_ENUMERATION_VERTICES: usize = 10;

/// Adjacency rows of the magic tournament, `MAGIC_ROWS[u]` bit string with
/// character `v` set iff `u -> v`.
pub const MAGIC_ROWS: [&str; 8] = [
    "01100010", "00111100", "00011011", "10001111", "10000111", "10100011", "01000001", "11000000",
];

pub const MAGIC_SIZE: usize = 8;

/// `MAGIC_MATRIX[u][v]` iff `u -> v`.
pub const MAGIC_MATRIX: [[bool; MAGIC_SIZE]; MAGIC_SIZE] = {
    let mut m = [[false; MAGIC_SIZE]; MAGIC_SIZE];
    let mut u = 0;
    while u < MAGIC_SIZE {
        let row = MAGIC_ROWS[u].as_bytes();
        let mut v = 0;
        while v < MAGIC_SIZE {
            m[u][v] = row[v] == b'1';
            v += 1;
        }
        u += 1;
    }
    m
};

/// Back-arcs of the magic tournament under its forest-ordering, `(tail, head)`.
pub const MAGIC_BACK_ARCS: [(usize, usize); 7] =
    [(3, 0), (4, 0), (5, 0), (7, 0), (6, 1), (7, 1), (5, 2)];

pub fn magic_tournament() -> Tournament {
    Tournament::from_fn(MAGIC_SIZE, |u, v| MAGIC_MATRIX[u][v])
}

/// Direct port of the reference cycle search: DFS over `T^≺` where `≺` is
/// given as a position array (`position[u] < position[v]` iff `u ≺ v`).
/// Kept independent of the union-find code as a cross-check.
pub fn dfs_is_forest(t: &Tournament, position: &[usize]) -> bool {
    let n = t.len();
    let mut visited = vec![false; n];

    fn dfs(t: &Tournament, p: &[usize], visited: &mut [bool], u: usize, parent: usize) -> bool {
        if visited[u] {
            return true;
        }
        visited[u] = true;
        (0..t.len())
            .filter(|&v| v != parent)
            .any(|v| t.has_arc(u, v) == (p[v] <= p[u]) && dfs(t, p, visited, v, u))
    }

    (0..n).all(|x| visited[x] || !dfs(t, position, &mut visited, x, x))
}

/// All forest-orderings of `t` in lexicographic order, truncated to `cap`.
///
/// The permutation space is split by first vertex and the slices are
/// searched in parallel; concatenating them in first-vertex order restores
/// the lexicographic order, so the result does not depend on the pool size.
pub fn enumerate_forest_orderings(
    t: &Tournament,
    cap: usize,
) -> Result<Vec<Ordering>, SizeGuardError> {
    guard(
        "forest-ordering enumeration",
        t.len(),
        MAX_ENUMERATION_VERTICES,
    )?;
    let n = t.len();
    if n == 0 {
        return Ok(if cap > 0 {
            vec![Ordering::identity(0)]
        } else {
            Vec::new()
        });
    }
    let slices: Vec<Vec<Ordering>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut sets = DisjointSets::new(n);
            let mut found = Vec::new();
            let _ = for_each_permutation_from(n, first, |seq| {
                if found.len() >= cap {
                    return ControlFlow::Break(());
                }
                if sequence_is_forest(t, seq, &mut sets) {
                    found.push(Ordering::new(seq.to_vec()).expect("permutation"));
                }
                ControlFlow::Continue(())
            });
            found
        })
        .collect();
    Ok(slices.into_iter().flatten().take(cap).collect())
}

/// Outcome of the exhaustive uniqueness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessReport {
    pub vertices: usize,
    pub total_permutations: u64,
    pub forest_count: usize,
    /// The forest-orderings found (all of them; the count is small in practice).
    pub forest_orderings: Vec<Ordering>,
    /// Permutations on which the union-find and DFS checks disagreed.
    pub checker_disagreements: u64,
    pub unique_is_identity: bool,
    /// Edge count of the backedge graph of the unique forest-ordering.
    pub tree_edges: Option<usize>,
    pub is_tree: bool,
    pub passed: bool,
}

impl fmt::Display for UniquenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices)?;
        writeln!(f, "permutations checked: {}", self.total_permutations)?;
        writeln!(f, "forest-orderings: {}", self.forest_count)?;
        for ord in self.forest_orderings.iter().take(10) {
            let seq: Vec<String> = ord.sequence().iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", seq.join(" "))?;
        }
        if self.forest_orderings.len() > 10 {
            writeln!(f, "  ...")?;
        }
        writeln!(f, "checker disagreements: {}", self.checker_disagreements)?;
        writeln!(f, "unique and identity: {}", self.unique_is_identity)?;
        match self.tree_edges {
            Some(e) => writeln!(f, "backedge edges: {e} (tree: {})", self.is_tree)?,
            None => writeln!(f, "backedge edges: n/a")?,
        }
        write!(f, "result: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Checks over every permutation that `t` has exactly one forest-ordering,
/// that it is the identity, and that its backedge graph is a spanning tree.
/// Every permutation is also run through [`dfs_is_forest`].
pub fn verify_unique_tree_ordering(t: &Tournament) -> Result<UniquenessReport, SizeGuardError> {
    guard("uniqueness verification", t.len(), MAX_ENUMERATION_VERTICES)?;
    let n = t.len();
    let forest_orderings = enumerate_forest_orderings(t, usize::MAX)?;

    let checker_disagreements: u64 = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut sets = DisjointSets::new(n);
            let mut position = vec![0; n];
            let mut bad = 0u64;
            let _ = for_each_permutation_from(n, first, |seq| {
                for (rank, &v) in seq.iter().enumerate() {
                    position[v] = rank;
                }
                if sequence_is_forest(t, seq, &mut sets) != dfs_is_forest(t, &position) {
                    bad += 1;
                }
                ControlFlow::Continue(())
            });
            bad
        })
        .sum();

    let unique_is_identity = forest_orderings.len() == 1 && forest_orderings[0].is_identity();
    let (tree_edges, is_tree) = match forest_orderings.as_slice() {
        [only] => {
            let g = backedge_graph(t, only).expect("same size");
            (Some(g.edge_count()), g.is_tree())
        }
        _ => (None, false),
    };
    let passed = unique_is_identity
        && is_tree
        && tree_edges == Some(n.saturating_sub(1))
        && checker_disagreements == 0;
    Ok(UniquenessReport {
        vertices: n,
        total_permutations: factorial(n),
        forest_count: forest_orderings.len(),
        forest_orderings,
        checker_disagreements,
        unique_is_identity,
        tree_edges,
        is_tree,
        passed,
    })
}

/// The exhaustive uniqueness check on the compiled-in magic tournament.
pub fn verify_magic() -> UniquenessReport {
    verify_unique_tree_ordering(&magic_tournament()).expect("8 vertices is within the guard")
}

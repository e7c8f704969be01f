//! Exact procedures for class-constrained feedback arc sets, plus the
//! brute-force dichromatic number and tournament clique number.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use thiserror::Error;

use crate::backedge::{backedge_graph, BackedgeGraph};
use crate::dsu::UndoDisjointSets;
use crate::permutations::{for_each_permutation, guard, SizeGuardError};
use crate::tournament::{Ordering, Tournament, VertexId};

/// Size limit of [`exhaustive_oracle`].
pub const MAX_ORACLE_VERTICES: usize = 10;
/// Size limit of [`dichromatic_number`] and [`clique_number`].
pub const MAX_COLORING_VERTICES: usize = 8;

/// Graph class `C` of a `C`-FAS: an ordering is accepted when its backedge
/// graph lies in the class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassPredicate {
    Forest,
    Tree,
    Bipartite,
    /// Graphs with clique number at most `k`.
    CliqueAtMost(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown graph class `{0}` (expected forest, tree, bipartite or clique<k>)")]
pub struct UnknownClass(pub String);

impl FromStr for ClassPredicate {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "forest" => Ok(Self::Forest),
            "tree" => Ok(Self::Tree),
            "bipartite" => Ok(Self::Bipartite),
            _ => s
                .strip_prefix("clique")
                .and_then(|k| k.parse().ok())
                .map(Self::CliqueAtMost)
                .ok_or_else(|| UnknownClass(s.to_string())),
        }
    }
}

impl fmt::Display for ClassPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Forest => write!(f, "forest"),
            Self::Tree => write!(f, "tree"),
            Self::Bipartite => write!(f, "bipartite"),
            Self::CliqueAtMost(k) => write!(f, "clique{k}"),
        }
    }
}

impl ClassPredicate {
    pub fn accepts(&self, g: &BackedgeGraph) -> bool {
        match *self {
            Self::Forest => g.is_forest(),
            Self::Tree => g.is_tree(),
            Self::Bipartite => is_bipartite(g),
            Self::CliqueAtMost(k) => clique_number_of_graph(g) <= k,
        }
    }

    /// Whether placement search may prune with the forest rule. The rule
    /// accepts a prefix iff its backedge graph is a forest, which is exact for
    /// [`ClassPredicate::Forest`] and a necessary condition for
    /// [`ClassPredicate::Tree`]. The other classes are only checked at leaves.
    pub fn has_forest_prefix_rule(&self) -> bool {
        matches!(self, Self::Forest | Self::Tree)
    }
}

fn is_bipartite(g: &BackedgeGraph) -> bool {
    let n = g.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut stack = Vec::new();
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    stack.push(w);
                } else if color[w] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Neighbourhood bitmasks; only valid for graphs on at most 64 vertices.
fn adjacency_masks(g: &BackedgeGraph) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// Exact clique number by branching on candidate sets.
pub fn clique_number_of_graph(g: &BackedgeGraph) -> usize {
    assert!(
        g.vertex_count() <= 64,
        "clique search supports at most 64 vertices"
    );
    fn grow(adj: &[u64], size: usize, candidates: u64, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(adj, size + 1, rest & adj[v], best);
        }
    }
    let adj = adjacency_masks(g);
    let all = if g.vertex_count() == 64 {
        u64::MAX
    } else {
        (1u64 << g.vertex_count()) - 1
    };
    let mut best = 0;
    grow(&adj, 0, all, &mut best);
    best
}

/// Whether `g` can be properly coloured with `colors` colours.
pub fn is_colorable(g: &BackedgeGraph, colors: usize) -> bool {
    fn assign(
        g: &BackedgeGraph,
        v: usize,
        colors: usize,
        used: usize,
        color: &mut [usize],
    ) -> bool {
        if v == g.vertex_count() {
            return true;
        }
        // Symmetry breaking: a new colour is only ever the next unused one.
        for c in 0..colors.min(used + 1) {
            if g.neighbors(v).iter().all(|&w| w >= v || color[w] != c) {
                color[v] = c;
                if assign(g, v + 1, colors, used.max(c + 1), color) {
                    return true;
                }
            }
        }
        false
    }
    if g.vertex_count() == 0 {
        return true;
    }
    let mut color = vec![usize::MAX; g.vertex_count()];
    assign(g, 0, colors, 0, &mut color)
}

pub fn chromatic_number(g: &BackedgeGraph) -> usize {
    (0..=g.vertex_count())
        .find(|&k| is_colorable(g, k))
        .expect("n colours always suffice")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Placements tried (one per search-tree node below the root).
    pub nodes: u64,
    /// Placements rejected by the prefix rule.
    pub prunes: u64,
    /// Complete orderings checked against the predicate.
    pub leaves: u64,
}

impl std::ops::AddAssign for SearchStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes += rhs.nodes;
        self.prunes += rhs.prunes;
        self.leaves += rhs.leaves;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub decision: bool,
    /// Lexicographically smallest accepted ordering, when one exists.
    pub witness: Option<Ordering>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Use the forest prefix rule when the class has one.
    pub pruning: bool,
    /// Worker threads; `1` searches sequentially, `0` uses the current pool.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            pruning: true,
            workers: 1,
        }
    }
}

struct Placement<'a> {
    t: &'a Tournament,
    class: ClassPredicate,
    prune: bool,
    sets: UndoDisjointSets,
    placed: Vec<VertexId>,
    used: Vec<bool>,
    roots: Vec<usize>,
    stats: SearchStats,
}

impl<'a> Placement<'a> {
    fn new(t: &'a Tournament, class: ClassPredicate, prune: bool) -> Self {
        let n = t.len();
        Self {
            t,
            class,
            prune,
            sets: UndoDisjointSets::new(n),
            placed: Vec::with_capacity(n),
            used: vec![false; n],
            roots: Vec::with_capacity(n),
            stats: SearchStats::default(),
        }
    }

    /// Tries to append `u`. With pruning, the new back-edges form a star
    /// from `u` to every placed `w` with `u -> w`; the prefix stays a forest
    /// iff those `w` lie in pairwise distinct components.
    fn push(&mut self, u: VertexId) -> Option<usize> {
        self.stats.nodes += 1;
        let checkpoint = self.sets.checkpoint();
        if self.prune {
            self.roots.clear();
            for &w in &self.placed {
                if self.t.has_arc(u, w) {
                    self.roots.push(self.sets.find(w));
                }
            }
            self.roots.sort_unstable();
            if self.roots.windows(2).any(|r| r[0] == r[1]) {
                self.stats.prunes += 1;
                return None;
            }
            for i in 0..self.placed.len() {
                let w = self.placed[i];
                if self.t.has_arc(u, w) {
                    self.sets.union(u, w);
                }
            }
        }
        self.placed.push(u);
        self.used[u] = true;
        Some(checkpoint)
    }

    fn pop(&mut self, checkpoint: usize) {
        let u = self.placed.pop().expect("non-empty prefix");
        self.used[u] = false;
        self.sets.rollback(checkpoint);
    }

    fn leaf_accepts(&mut self) -> bool {
        self.stats.leaves += 1;
        let ord = Ordering::new(self.placed.clone()).expect("complete placement");
        self.class
            .accepts(&backedge_graph(self.t, &ord).expect("same size"))
    }

    /// Depth-first search in ascending vertex order; stops at the first
    /// accepted leaf or when `abort` says so.
    fn search(&mut self, abort: &dyn Fn() -> bool) -> ControlFlow<bool> {
        if self.placed.len() == self.t.len() {
            return if self.leaf_accepts() {
                ControlFlow::Break(true)
            } else {
                ControlFlow::Continue(())
            };
        }
        if abort() {
            return ControlFlow::Break(false);
        }
        for u in 0..self.t.len() {
            if self.used[u] {
                continue;
            }
            if let Some(cp) = self.push(u) {
                let r = self.search(abort);
                if matches!(r, ControlFlow::Break(true)) {
                    return r;
                }
                self.pop(cp);
                r?;
            }
        }
        ControlFlow::Continue(())
    }
}

struct SubtreeResult {
    witness: Option<Ordering>,
    stats: SearchStats,
}

fn search_subtree(
    t: &Tournament,
    class: ClassPredicate,
    prune: bool,
    first: VertexId,
    abort: &dyn Fn() -> bool,
) -> SubtreeResult {
    let mut p = Placement::new(t, class, prune);
    let mut witness = None;
    if let Some(_cp) = p.push(first) {
        if p.search(abort) == ControlFlow::Break(true) {
            witness = Some(Ordering::new(p.placed.clone()).expect("complete placement"));
        }
    }
    SubtreeResult {
        witness,
        stats: p.stats,
    }
}

/// Complete left-to-right placement search for an ordering whose backedge
/// graph lies in `class`, with the forest prefix rule where applicable.
pub fn find_class_ordering(t: &Tournament, class: ClassPredicate) -> SearchOutcome {
    find_class_ordering_with(t, class, SearchOptions::default())
}

/// As [`find_class_ordering`] with explicit options.
///
/// With several workers the subtrees below each first vertex are searched
/// concurrently. Subtrees are combined in first-vertex order and only the
/// subtrees up to the first success count towards the statistics, so the
/// outcome is identical to the sequential search for any worker count.
pub fn find_class_ordering_with(
    t: &Tournament,
    class: ClassPredicate,
    opts: SearchOptions,
) -> SearchOutcome {
    let prune = opts.pruning && class.has_forest_prefix_rule();
    let n = t.len();
    if n == 0 {
        let accepted = class.accepts(&backedge_graph(t, &Ordering::identity(0)).expect("empty"));
        return SearchOutcome {
            decision: accepted,
            witness: accepted.then(|| Ordering::identity(0)),
            stats: SearchStats {
                leaves: 1,
                ..SearchStats::default()
            },
        };
    }

    let results: Vec<SubtreeResult> = if opts.workers == 1 {
        let mut out = Vec::new();
        for first in 0..n {
            let r = search_subtree(t, class, prune, first, &|| false);
            let done = r.witness.is_some();
            out.push(r);
            if done {
                break;
            }
        }
        out
    } else {
        let best = AtomicUsize::new(usize::MAX);
        let run = || {
            (0..n)
                .into_par_iter()
                .map(|first| {
                    if best.load(AtomicOrdering::Relaxed) < first {
                        return None;
                    }
                    let abort = || best.load(AtomicOrdering::Relaxed) < first;
                    let r = search_subtree(t, class, prune, first, &abort);
                    if r.witness.is_some() {
                        best.fetch_min(first, AtomicOrdering::Relaxed);
                    }
                    Some(r)
                })
                .collect::<Vec<_>>()
        };
        let all = if opts.workers == 0 {
            run()
        } else {
            crate::with_workers(opts.workers, run)
        };
        let winner = best.into_inner();
        all.into_iter()
            .take(winner.saturating_add(1).min(n))
            .map(|r| r.expect("subtrees up to the winner always complete"))
            .collect()
    };

    let mut stats = SearchStats::default();
    let mut witness = None;
    for r in results {
        stats += r.stats;
        if r.witness.is_some() {
            witness = r.witness;
            break;
        }
    }
    SearchOutcome {
        decision: witness.is_some(),
        witness,
        stats,
    }
}

/// Ground truth by enumerating every ordering in lexicographic order.
pub fn exhaustive_oracle(
    t: &Tournament,
    class: ClassPredicate,
) -> Result<SearchOutcome, SizeGuardError> {
    guard("exhaustive oracle", t.len(), MAX_ORACLE_VERTICES)?;
    let mut stats = SearchStats::default();
    let mut witness = None;
    let _ = for_each_permutation(t.len(), |seq| {
        stats.leaves += 1;
        let ord = Ordering::new(seq.to_vec()).expect("permutation");
        if class.accepts(&backedge_graph(t, &ord).expect("same size")) {
            witness = Some(ord);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(SearchOutcome {
        decision: witness.is_some(),
        witness,
        stats,
    })
}

/// Minimum over all orderings of a graph invariant of the backedge graph,
/// with `beats(g, bound)` deciding whether `g` achieves a value below `bound`.
fn min_over_orderings(
    t: &Tournament,
    upper: usize,
    mut value_below: impl FnMut(&BackedgeGraph, usize) -> Option<usize>,
) -> usize {
    let mut best = upper;
    let _ = for_each_permutation(t.len(), |seq| {
        let ord = Ordering::new(seq.to_vec()).expect("permutation");
        let g = backedge_graph(t, &ord).expect("same size");
        if let Some(v) = value_below(&g, best) {
            best = v;
        }
        if best <= 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    best
}

/// `dic(T) = min_≺ χ(T^≺)`, by brute force over all orderings.
pub fn dichromatic_number(t: &Tournament) -> Result<usize, SizeGuardError> {
    guard("dichromatic number", t.len(), MAX_COLORING_VERTICES)?;
    if t.is_empty() {
        return Ok(0);
    }
    Ok(min_over_orderings(t, t.len(), |g, best| {
        let mut k = best;
        while k > 1 && is_colorable(g, k - 1) {
            k -= 1;
        }
        (k < best).then_some(k)
    }))
}

/// Smallest number of parts in a partition of `V(T)` into transitive
/// subtournaments, by dynamic programming over vertex subsets. Independent of
/// orderings; serves as the cross-check for [`dichromatic_number`].
pub fn dichromatic_number_by_partition(t: &Tournament) -> Result<usize, SizeGuardError> {
    guard("transitive partition", t.len(), MAX_COLORING_VERTICES)?;
    let n = t.len();
    let full = (1usize << n) - 1;
    // A tournament is transitive iff it has no directed triangle.
    let mut transitive = vec![true; 1 << n];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if !transitive[rest] {
            transitive[mask] = false;
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&v| rest >> v & 1 == 1).collect();
        transitive[mask] = !members.iter().any(|&u| {
            members
                .iter()
                .any(|&w| t.has_arc(low, u) && t.has_arc(u, w) && t.has_arc(w, low))
        });
    }
    let mut parts = vec![usize::MAX; 1 << n];
    parts[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Enumerate subsets of `rest`, each joined with the lowest vertex.
        let mut sub = rest;
        loop {
            let part = sub | low;
            if transitive[part] && parts[mask ^ part] != usize::MAX {
                parts[mask] = parts[mask].min(parts[mask ^ part] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(parts[full])
}

/// `ω⃗(T) = min_≺ ω(T^≺)`, by brute force over all orderings.
pub fn clique_number(t: &Tournament) -> Result<usize, SizeGuardError> {
    guard("tournament clique number", t.len(), MAX_COLORING_VERTICES)?;
    if t.is_empty() {
        return Ok(0);
    }
    Ok(min_over_orderings(t, t.len(), |g, best| {
        let w = clique_number_of_graph(g);
        (w < best).then_some(w)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::magic_tournament;
    use crate::tournament::transitive;

    fn three_cycle() -> Tournament {
        Tournament::from_fn(3, |u, v| !(u == 0 && v == 2))
    }

    #[test]
    fn class_names_round_trip() {
        for c in [
            ClassPredicate::Forest,
            ClassPredicate::Tree,
            ClassPredicate::Bipartite,
            ClassPredicate::CliqueAtMost(3),
        ] {
            assert_eq!(c.to_string().parse::<ClassPredicate>().unwrap(), c);
        }
        assert!("clique".parse::<ClassPredicate>().is_err());
        assert!("path".parse::<ClassPredicate>().is_err());
    }

    #[test]
    fn magic_forest_witness_is_identity() {
        let out = find_class_ordering(&magic_tournament(), ClassPredicate::Forest);
        assert!(out.decision);
        assert!(out.witness.unwrap().is_identity());
    }

    #[test]
    fn transitive_witness_is_topological() {
        let (t, topo) = transitive(6);
        let out = find_class_ordering(&t, ClassPredicate::Forest);
        assert_eq!(out.witness, Some(topo));
    }

    #[test]
    fn three_cycle_classes() {
        let t = three_cycle();
        let tree = exhaustive_oracle(&t, ClassPredicate::Tree).unwrap();
        // 0 < 1 < 2 leaves a single back edge; 0 < 2 < 1 leaves the path 0-2-1.
        assert_eq!(tree.witness.as_ref().unwrap().sequence(), &[0, 2, 1]);
        assert_eq!(tree.stats.leaves, 2);
        assert_eq!(
            find_class_ordering(&t, ClassPredicate::Tree).witness,
            tree.witness
        );
        assert!(
            !exhaustive_oracle(&t, ClassPredicate::CliqueAtMost(1))
                .unwrap()
                .decision
        );
        assert!(find_class_ordering(&t, ClassPredicate::Bipartite).decision);
    }

    #[test]
    fn oracle_guard() {
        assert!(exhaustive_oracle(&Tournament::transitive(11), ClassPredicate::Forest).is_err());
        assert!(dichromatic_number(&Tournament::transitive(9)).is_err());
        assert!(clique_number(&Tournament::transitive(9)).is_err());
    }

    #[test]
    fn dic_and_omega_small_cases() {
        let (t, _) = transitive(5);
        assert_eq!(dichromatic_number(&t).unwrap(), 1);
        assert_eq!(clique_number(&t).unwrap(), 1);
        assert_eq!(dichromatic_number_by_partition(&t).unwrap(), 1);
        let c = three_cycle();
        assert_eq!(dichromatic_number(&c).unwrap(), 2);
        assert_eq!(dichromatic_number_by_partition(&c).unwrap(), 2);
        assert_eq!(clique_number(&c).unwrap(), 2);
        let empty = Tournament::transitive(0);
        assert_eq!(dichromatic_number(&empty).unwrap(), 0);
        assert_eq!(dichromatic_number_by_partition(&empty).unwrap(), 0);
        assert_eq!(clique_number(&empty).unwrap(), 0);
    }

    #[test]
    fn graph_invariants() {
        let c5 = BackedgeGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(chromatic_number(&c5), 3);
        assert_eq!(clique_number_of_graph(&c5), 2);
        assert!(!is_bipartite(&c5));
        let k4 =
            BackedgeGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(chromatic_number(&k4), 4);
        assert_eq!(clique_number_of_graph(&k4), 4);
        let empty = BackedgeGraph::from_edges(3, []).unwrap();
        assert_eq!(chromatic_number(&empty), 1);
        assert_eq!(clique_number_of_graph(&empty), 1);
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let reversed: Vec<usize> = (0..8).rev().collect();
        let t = magic_tournament().induced(&reversed);
        let seq = find_class_ordering(&t, ClassPredicate::Forest);
        for workers in [0, 2, 4] {
            let par = find_class_ordering_with(
                &t,
                ClassPredicate::Forest,
                SearchOptions {
                    pruning: true,
                    workers,
                },
            );
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn unpruned_search_agrees() {
        let reversed: Vec<usize> = (0..8).rev().collect();
        let t = magic_tournament().induced(&reversed);
        let pruned = find_class_ordering(&t, ClassPredicate::Forest);
        let plain = find_class_ordering_with(
            &t,
            ClassPredicate::Forest,
            SearchOptions {
                pruning: false,
                workers: 1,
            },
        );
        assert_eq!(plain.decision, pruned.decision);
        assert_eq!(plain.witness, pruned.witness);
        assert_eq!(plain.stats.prunes, 0);
        assert!(pruned.stats.prunes > 0);
        assert_eq!(
            pruned.witness.unwrap().sequence(),
            &[7, 6, 5, 4, 3, 2, 1, 0]
        );
        assert!(plain.stats.nodes > pruned.stats.nodes);
    }

    #[test]
    fn empty_tournament() {
        let t = Tournament::transitive(0);
        assert!(find_class_ordering(&t, ClassPredicate::Forest).decision);
        assert!(!find_class_ordering(&t, ClassPredicate::Tree).decision);
        assert!(
            exhaustive_oracle(&t, ClassPredicate::Forest)
                .unwrap()
                .decision
        );
    }
}

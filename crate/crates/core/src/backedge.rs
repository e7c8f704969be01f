//! Backedge graphs of ordered tournaments and the forest/tree class checks.

use std::collections::BTreeSet;

use crate::dsu::DisjointSets;
use crate::tournament::{invalid, GraphError, Ordering, Tournament, VertexId};

/// Simple undirected graph on `0..n`.
///
/// Built from an ordered tournament by [`backedge_graph`], where `{u, v}` is
/// an edge iff `v ≺ u` and `u -> v`. Edges are stored normalised (`u < v`)
/// and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackedgeGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
}

impl BackedgeGraph {
    /// Builds a graph from an arbitrary edge list. Duplicates collapse; loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!(
                    "edge {{{u}, {v}}} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(invalid(format!("loop at {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_normalized(n, list))
    }

    fn from_normalized(n: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Acyclicity via union-find.
    pub fn is_forest(&self) -> bool {
        let mut sets = DisjointSets::new(self.n);
        self.edges.iter().all(|&(u, v)| sets.union(u, v))
    }

    /// Component label for every vertex, labels numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut sets = DisjointSets::new(self.n);
        for &(u, v) in &self.edges {
            sets.union(u, v);
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.n);
        for v in 0..self.n {
            let root = sets.find(v);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            out.push(label[root]);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// A connected forest. The empty graph is not a tree; a single vertex is.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() == self.n - 1 && self.is_forest()
    }

    /// Subgraph induced by `vertices`, relabelled by their index in the slice.
    pub fn induced(&self, vertices: &[VertexId]) -> Self {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u].min(index[v]), index[u].max(index[v])))
            .collect();
        edges.sort_unstable();
        Self::from_normalized(vertices.len(), edges)
    }
}

/// The backedge graph `T^≺`.
pub fn backedge_graph(t: &Tournament, ord: &Ordering) -> Result<BackedgeGraph, GraphError> {
    ord.check_len(t)?;
    let seq = ord.sequence();
    let mut edges = Vec::new();
    for (j, &later) in seq.iter().enumerate() {
        for &earlier in &seq[..j] {
            if t.has_arc(later, earlier) {
                edges.push((later.min(earlier), later.max(earlier)));
            }
        }
    }
    edges.sort_unstable();
    Ok(BackedgeGraph::from_normalized(t.len(), edges))
}

/// Forward arcs of `(T, ≺)`, the complement of the back-arcs within `A(T)`.
pub fn forward_arcs(
    t: &Tournament,
    ord: &Ordering,
) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
    ord.check_len(t)?;
    Ok(t.arcs().filter(|&(u, v)| ord.precedes(u, v)).collect())
}

/// Forest test on a raw vertex sequence without materialising the graph.
/// `sets` must have exactly `t.len()` elements; it is reset first.
pub(crate) fn sequence_is_forest(
    t: &Tournament,
    seq: &[VertexId],
    sets: &mut DisjointSets,
) -> bool {
    sets.reset();
    for (j, &later) in seq.iter().enumerate() {
        for &earlier in &seq[..j] {
            if t.has_arc(later, earlier) && !sets.union(later, earlier) {
                return false;
            }
        }
    }
    true
}

pub fn is_forest(g: &BackedgeGraph) -> bool {
    g.is_forest()
}

pub fn is_forest_ordering(t: &Tournament, ord: &Ordering) -> Result<bool, GraphError> {
    Ok(backedge_graph(t, ord)?.is_forest())
}

pub fn is_tree_ordering(t: &Tournament, ord: &Ordering) -> Result<bool, GraphError> {
    Ok(backedge_graph(t, ord)?.is_tree())
}

/// Turns a forest-ordering into a tree-ordering.
///
/// Sweeps left to right; whenever two consecutive vertices `x ≺ y` lie in
/// different backedge components the arc is necessarily `x -> y`, so swapping
/// them turns it into a back-arc that joins the two components. After step
/// `i` the first `i + 2` vertices are connected, hence the result is a tree.
pub fn forest_to_tree(t: &Tournament, ord: &Ordering) -> Result<Ordering, GraphError> {
    let g = backedge_graph(t, ord)?;
    if !g.is_forest() {
        return Err(invalid("ordering is not a forest-ordering"));
    }
    let mut sets = DisjointSets::new(t.len());
    for &(u, v) in g.edges() {
        sets.union(u, v);
    }
    let mut seq = ord.sequence().to_vec();
    for i in 0..seq.len().saturating_sub(1) {
        let (x, y) = (seq[i], seq[i + 1]);
        if !sets.same(x, y) {
            debug_assert!(t.has_arc(x, y));
            seq.swap(i, i + 1);
            sets.union(x, y);
        }
    }
    Ordering::new(seq)
}

/// Checks the separation property on one instantiation: given
/// `a => X => b` and `b ≺ a`, every `x ∈ X` is adjacent to `a` or `b` in
/// `T^≺`. A `false` return means something upstream is broken.
pub fn lemma_tool_check(
    t: &Tournament,
    ord: &Ordering,
    a: VertexId,
    b: VertexId,
    xs: &[VertexId],
) -> Result<bool, GraphError> {
    ord.check_len(t)?;
    let n = t.len();
    if a >= n || b >= n || a == b {
        return Err(invalid("a and b must be distinct vertices"));
    }
    if let Some(&x) = xs.iter().find(|&&x| x >= n || x == a || x == b) {
        return Err(invalid(format!("{x} is not a valid member of X")));
    }
    if !t.dominates(&[a], xs) || !t.dominates(xs, &[b]) {
        return Err(invalid("precondition a => X => b does not hold"));
    }
    if !ord.precedes(b, a) {
        return Err(invalid("precondition b ≺ a does not hold"));
    }
    let g = backedge_graph(t, ord)?;
    Ok(xs.iter().all(|&x| g.has_edge(a, x) || g.has_edge(b, x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub vertex: VertexId,
    /// The unique neighbour still present when `vertex` was removed.
    pub witness_neighbor: Option<VertexId>,
}

/// Removal order certifying that a graph is 1-degenerate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PeelSchedule {
    pub steps: Vec<PeelStep>,
}

impl PeelSchedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays the schedule against `g`: every vertex removed exactly once,
    /// each with at most one remaining neighbour, which must match the
    /// recorded witness.
    pub fn replays_on(&self, g: &BackedgeGraph) -> bool {
        replay(g, &self.steps, true)
    }
}

/// Replays removals; with `complete` the graph must end up empty.
pub(crate) fn replay(g: &BackedgeGraph, steps: &[PeelStep], complete: bool) -> bool {
    let mut removed = vec![false; g.vertex_count()];
    for step in steps {
        if step.vertex >= removed.len() || removed[step.vertex] {
            return false;
        }
        let mut alive = g.neighbors(step.vertex).iter().filter(|&&w| !removed[w]);
        let first = alive.next().copied();
        if alive.next().is_some() || first != step.witness_neighbor {
            return false;
        }
        removed[step.vertex] = true;
    }
    !complete || removed.iter().all(|&r| r)
}

/// Vertices that could not be peeled: the 2-core of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelFailure {
    pub stuck: Vec<VertexId>,
}

/// Repeatedly removes a vertex of degree at most one, smallest index first.
/// Succeeds exactly when the graph is a forest.
pub fn peel_1_degenerate(g: &BackedgeGraph) -> Result<PeelSchedule, PeelFailure> {
    let mut peeler = Peeler::new(g);
    let all: Vec<_> = (0..g.vertex_count()).collect();
    peeler.peel_within(&all);
    let stuck = peeler.remaining();
    if stuck.is_empty() {
        Ok(PeelSchedule {
            steps: peeler.steps,
        })
    } else {
        Err(PeelFailure { stuck })
    }
}

/// Incremental peeling state, shared with the staged certificate.
pub(crate) struct Peeler<'g> {
    g: &'g BackedgeGraph,
    degree: Vec<usize>,
    removed: Vec<bool>,
    pub(crate) steps: Vec<PeelStep>,
}

impl<'g> Peeler<'g> {
    pub(crate) fn new(g: &'g BackedgeGraph) -> Self {
        Self {
            g,
            degree: (0..g.vertex_count()).map(|v| g.degree(v)).collect(),
            removed: vec![false; g.vertex_count()],
            steps: Vec::new(),
        }
    }

    pub(crate) fn remaining(&self) -> Vec<VertexId> {
        (0..self.removed.len())
            .filter(|&v| !self.removed[v])
            .collect()
    }

    /// Peels as many vertices of `allowed` as possible, smallest ready vertex
    /// first. Returns the allowed vertices left behind.
    pub(crate) fn peel_within(&mut self, allowed: &[VertexId]) -> Vec<VertexId> {
        let mut in_scope = vec![false; self.removed.len()];
        for &v in allowed {
            in_scope[v] = !self.removed[v];
        }
        let mut ready: BTreeSet<VertexId> = allowed
            .iter()
            .copied()
            .filter(|&v| in_scope[v] && self.degree[v] <= 1)
            .collect();
        while let Some(v) = ready.pop_first() {
            let witness = self
                .g
                .neighbors(v)
                .iter()
                .copied()
                .find(|&w| !self.removed[w]);
            self.removed[v] = true;
            in_scope[v] = false;
            self.steps.push(PeelStep {
                vertex: v,
                witness_neighbor: witness,
            });
            if let Some(w) = witness {
                self.degree[w] -= 1;
                if in_scope[w] && self.degree[w] <= 1 {
                    ready.insert(w);
                }
            }
        }
        allowed
            .iter()
            .copied()
            .filter(|&v| !self.removed[v])
            .collect()
    }
}

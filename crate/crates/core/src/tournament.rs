//! Tournaments, vertex orderings, and the two ways of gluing tournaments
//! together: composition and back-arc matchings.

use std::fmt;

use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidArgument(msg.into())
}

/// Bit offset of the unordered pair `{u, v}` (with `u < v`) in the upper triangle.
#[inline]
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// A complete orientation on vertices `0..n`.
///
/// One bit per unordered pair `{u, v}` with `u < v`; the bit is set when the
/// arc goes `u -> v`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    bits: Vec<u64>,
}

impl Tournament {
    fn empty_bits(n: usize) -> Vec<u64> {
        let pairs = n * n.saturating_sub(1) / 2;
        vec![0; pairs.div_ceil(64)]
    }

    /// Builds a tournament from `forward(u, v)`, queried once for every `u < v`:
    /// `true` means the arc `u -> v`, `false` the arc `v -> u`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Self {
        let mut t = Self {
            n,
            bits: Self::empty_bits(n),
        };
        for u in 0..n {
            for v in u + 1..n {
                if forward(u, v) {
                    t.set_pair(u, v, true);
                }
            }
        }
        t
    }

    /// Builds a tournament from an adjacency matrix, `rows[u][v]` meaning `u -> v`.
    pub fn from_matrix<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self, GraphError> {
        let n = rows.len();
        for (u, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(invalid(format!(
                    "row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row[u] {
                return Err(invalid(format!("loop at vertex {u}")));
            }
            for v in u + 1..n {
                if row[v] == rows[v].as_ref()[u] {
                    return Err(invalid(format!(
                        "pair {{{u}, {v}}} must carry exactly one arc"
                    )));
                }
            }
        }
        Ok(Self::from_fn(n, |u, v| rows[u].as_ref()[v]))
    }

    /// The acyclic tournament in which `u -> v` whenever `u < v`.
    pub fn transitive(n: usize) -> Self {
        Self::from_fn(n, |_, _| true)
    }

    #[inline]
    fn set_pair(&mut self, u: usize, v: usize, forward: bool) {
        let i = pair_index(self.n, u, v);
        if forward {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    fn pair(&self, u: usize, v: usize) -> bool {
        let i = pair_index(self.n, u, v);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Whether the arc `u -> v` is present. Always `false` for `u == v`.
    #[inline]
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => self.pair(u, v),
            std::cmp::Ordering::Greater => !self.pair(v, u),
            std::cmp::Ordering::Equal => false,
        }
    }

    /// All arcs, in row-major order of the tail.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |u| {
            (0..self.n)
                .filter(move |&v| self.has_arc(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        (0..self.n).filter(|&v| self.has_arc(u, v)).count()
    }

    /// Adjacency matrix, `m[u][v]` meaning `u -> v`.
    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.has_arc(u, v)).collect())
            .collect()
    }

    /// Subtournament induced by `vertices`, relabelled by their index in the slice.
    pub fn induced(&self, vertices: &[VertexId]) -> Self {
        Self::from_fn(vertices.len(), |i, j| {
            self.has_arc(vertices[i], vertices[j])
        })
    }

    /// Whether `from => to`: every vertex of `from` beats every vertex of `to`.
    pub fn dominates(&self, from: &[VertexId], to: &[VertexId]) -> bool {
        from.iter().all(|&u| to.iter().all(|&v| self.has_arc(u, v)))
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Tournament({})", self.n)?;
        for u in 0..self.n {
            let row: String = (0..self.n)
                .map(|v| if self.has_arc(u, v) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Mutable tournament used while a construction is in progress.
///
/// A fresh builder starts out transitive (`u -> v` for all `u < v`), so every
/// arc that is never explicitly oriented ends up forward with respect to the
/// index order.
#[derive(Clone, Debug)]
pub struct TournamentBuilder {
    inner: Tournament,
}

impl TournamentBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            inner: Tournament::transitive(n),
        }
    }

    pub fn len(&self) -> usize {
        self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        self.inner.n == 0
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.inner.has_arc(u, v)
    }

    /// Orients the pair `{from, to}` as `from -> to`.
    pub fn orient(&mut self, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        let n = self.inner.n;
        if from >= n || to >= n {
            return Err(invalid(format!(
                "arc {from}->{to} out of range for {n} vertices"
            )));
        }
        if from == to {
            return Err(invalid(format!("cannot orient a loop at {from}")));
        }
        if from < to {
            self.inner.set_pair(from, to, true);
        } else {
            self.inner.set_pair(to, from, false);
        }
        Ok(())
    }

    pub fn build(self) -> Tournament {
        self.inner
    }
}

impl From<Tournament> for TournamentBuilder {
    fn from(inner: Tournament) -> Self {
        Self { inner }
    }
}

/// A total order on the vertices of a tournament.
///
/// Derived comparison is lexicographic on the vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordering {
    sequence: Vec<VertexId>,
    position: Vec<usize>,
}

impl Ordering {
    /// Validates that `sequence` is a permutation of `0..sequence.len()`.
    pub fn new(sequence: Vec<VertexId>) -> Result<Self, GraphError> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &v) in sequence.iter().enumerate() {
            if v >= n {
                return Err(invalid(format!("vertex {v} out of range for {n} vertices")));
            }
            if position[v] != usize::MAX {
                return Err(invalid(format!("vertex {v} appears twice")));
            }
            position[v] = rank;
        }
        Ok(Self { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[VertexId] {
        &self.sequence
    }

    pub fn into_sequence(self) -> Vec<VertexId> {
        self.sequence
    }

    /// Rank of `v` in the order.
    #[inline]
    pub fn position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    /// `u ≺ v`.
    #[inline]
    pub fn precedes(&self, u: VertexId, v: VertexId) -> bool {
        self.position[u] < self.position[v]
    }

    pub fn reversed(&self) -> Self {
        let sequence: Vec<_> = self.sequence.iter().rev().copied().collect();
        let n = sequence.len();
        let position = self.position.iter().map(|&p| n - 1 - p).collect();
        Self { sequence, position }
    }

    pub fn is_identity(&self) -> bool {
        self.sequence.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub(crate) fn check_len(&self, t: &Tournament) -> Result<(), GraphError> {
        if self.len() != t.len() {
            return Err(invalid(format!(
                "ordering has {} vertices but the tournament has {}",
                self.len(),
                t.len()
            )));
        }
        Ok(())
    }
}

/// `T1 => T2`: disjoint union with every arc directed from `T1` to `T2`.
/// Vertices of `T2` are shifted by `|T1|`.
pub fn compose(first: &Tournament, second: &Tournament) -> Tournament {
    let offset = first.len();
    Tournament::from_fn(offset + second.len(), |u, v| {
        if v < offset {
            first.has_arc(u, v)
        } else if u >= offset {
            second.has_arc(u - offset, v - offset)
        } else {
            true
        }
    })
}

/// The transitive tournament on `n` vertices together with its topological order.
pub fn transitive(n: usize) -> (Tournament, Ordering) {
    (Tournament::transitive(n), Ordering::identity(n))
}

/// Adds a back-arc matching from the block `src` to the block `dst`.
///
/// Both blocks must be given in topological order, be internally transitive
/// in that order, and `dst` must entirely precede `src` in `ord`. Installs
/// `src[i] -> dst[i]` for every `i` and `dst[j] -> src[i]` for every `i != j`,
/// so the back-arcs between the blocks under `ord` are exactly the pairs
/// `(src[i], dst[i])`, which are returned.
pub fn add_backarc_matching(
    host: &mut TournamentBuilder,
    src: &[VertexId],
    dst: &[VertexId],
    ord: &Ordering,
) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
    if src.len() != dst.len() {
        return Err(invalid(format!(
            "matching sides differ in size: {} vs {}",
            src.len(),
            dst.len()
        )));
    }
    if src.is_empty() {
        return Err(invalid("matching sides must be non-empty"));
    }
    if ord.len() != host.len() {
        return Err(invalid("ordering does not cover the host tournament"));
    }
    if let Some(&v) = src.iter().chain(dst).find(|&&v| v >= host.len()) {
        return Err(invalid(format!("vertex {v} out of range")));
    }
    for side in [src, dst] {
        for w in side.windows(2) {
            if !ord.precedes(w[0], w[1]) {
                return Err(invalid(format!(
                    "block is not listed in ordering order at {} / {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, &u) in side.iter().enumerate() {
            if let Some(&v) = side[i + 1..].iter().find(|&&v| !host.has_arc(u, v)) {
                return Err(invalid(format!(
                    "block is not transitive in the given order: missing {u}->{v}"
                )));
            }
        }
    }
    let last_dst = dst[dst.len() - 1];
    if !ord.precedes(last_dst, src[0]) {
        return Err(invalid(
            "destination block must entirely precede the source block",
        ));
    }

    let mut back = Vec::with_capacity(src.len());
    for (i, &s) in src.iter().enumerate() {
        for (j, &d) in dst.iter().enumerate() {
            if i == j {
                host.orient(s, d)?;
            } else {
                host.orient(d, s)?;
            }
        }
        back.push((s, dst[i]));
    }
    Ok(back)
}

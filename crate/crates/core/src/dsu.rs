//! Union-find structures.
//!
//! [`DisjointSets`] is the plain path-compressing variant used for one-shot
//! checks. [`UndoDisjointSets`] drops path compression so that every union can
//! be rolled back, which the placement search needs when it backtracks.

/// Union-find with path compression and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    /// Puts every element back into its own singleton set.
    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.size.fill(1);
        self.sets = self.parent.len();
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`. Returns `false` if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Number of disjoint sets currently tracked.
    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// Union-find that supports rolling back unions in LIFO order.
#[derive(Clone, Debug)]
pub struct UndoDisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    // Each entry is the root that was attached below another root, or `None`
    // for a union that merged nothing.
    history: Vec<Option<usize>>,
}

impl UndoDisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b` and records the step for [`Self::rollback`].
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(Some(rb));
        true
    }

    /// Opaque marker for the current state.
    pub fn checkpoint(&self) -> usize {
        self.history.len()
    }

    /// Undoes every union performed since `checkpoint`.
    pub fn rollback(&mut self, checkpoint: usize) {
        while self.history.len() > checkpoint {
            if let Some(child) = self.history.pop().flatten() {
                let root = self.parent[child];
                self.size[root] -= self.size[child];
                self.parent[child] = child;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_and_find() {
        let mut d = DisjointSets::new(5);
        assert!(d.union(0, 1));
        assert!(d.union(3, 4));
        assert!(!d.union(1, 0));
        assert!(d.same(0, 1));
        assert!(!d.same(1, 3));
        assert_eq!(d.set_count(), 3);
    }

    #[test]
    fn rollback_restores_partition() {
        let mut d = UndoDisjointSets::new(6);
        d.union(0, 1);
        let cp = d.checkpoint();
        d.union(1, 2);
        d.union(2, 2);
        d.union(3, 4);
        assert_eq!(d.find(2), d.find(0));
        d.rollback(cp);
        assert_eq!(d.find(1), d.find(0));
        assert_ne!(d.find(2), d.find(0));
        assert_ne!(d.find(3), d.find(4));
        d.rollback(0);
        assert_ne!(d.find(0), d.find(1));
    }
}

//! Forest feedback arc sets in tournaments.
//!
//! The crate is organised bottom-up:
//!
//! - [`tournament`] and [`backedge`]: tournaments, orderings, backedge graphs
//!   and the forest/tree checks on them.
//! - [`magic`]: the eight-vertex tournament whose only forest-ordering is the
//!   identity, plus the exhaustive verifier for that fact.
//! - [`reduction`]: compiles a 3-SAT instance into an ordered tournament that
//!   has a forest-ordering iff the instance is satisfiable.
//! - [`assignment`]: moves between satisfying assignments and
//!   forest-orderings of reduced tournaments.
//! - [`solver`]: exact search and brute-force oracles for class-constrained
//!   feedback arc sets, dichromatic number and tournament clique number.
//! - [`io`]: text formats for every object above.

pub mod assignment;
pub mod backedge;
pub mod cnf;
pub mod dsu;
pub mod io;
pub mod magic;
pub mod permutations;
pub mod reduction;
pub mod solver;
pub mod tournament;

pub use backedge::{
    backedge_graph, forest_to_tree, is_forest, is_forest_ordering, is_tree_ordering,
    lemma_tool_check, peel_1_degenerate, BackedgeGraph, PeelFailure, PeelSchedule, PeelStep,
};
pub use cnf::{CnfInstance, Literal};
pub use tournament::{
    add_backarc_matching, compose, transitive, GraphError, Ordering, Tournament, TournamentBuilder,
    VertexId,
};

/// Runs `op` on a dedicated pool of `workers` threads (`0` means the rayon default).
pub fn with_workers<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(op)
}

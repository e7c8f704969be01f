//! Moving between truth assignments and forest-orderings of reduced
//! tournaments.
//!
//! The truth value of an owner `w ∈ V ∪ L` is carried by which side of
//! `ℓ_w` it sits on: left means true. [`encode`] builds a forest-ordering
//! from a satisfying assignment by moving every false owner right after its
//! `Y` gadget; [`decode`] reads the assignment back off any forest-ordering
//! and re-checks the consistency facts the reduction guarantees.

use std::collections::HashMap;

use thiserror::Error;

use crate::backedge::{backedge_graph, replay, PeelStep, Peeler};
use crate::cnf::CnfInstance;
use crate::permutations::{guard, SizeGuardError};
use crate::reduction::{owners, Owner, Part, ReducedTournament};
use crate::tournament::{GraphError, Ordering, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("assignment covers {got} variables, the instance has {expected}")]
    VariableCount { expected: usize, got: usize },
    #[error("assignment does not satisfy clause {clause}")]
    NotSatisfying { clause: usize },
    #[error("ordering is not a forest-ordering")]
    NotForest,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("peeling stage {stage} ({name}) got stuck on {} vertices", stuck.len())]
    PeelStuck {
        stage: usize,
        name: &'static str,
        stuck: Vec<VertexId>,
    },
}

/// Total assignment of `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    /// `values[i]` is the value of `x_{i+1}`.
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn from_fn(num_vars: usize, f: impl FnMut(usize) -> bool) -> Self {
        Self {
            values: (1..=num_vars).map(f).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Value of `x_var`, 1-based.
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Clause-by-clause evaluation. Assignments of the wrong length never satisfy.
pub fn satisfies(instance: &CnfInstance, nu: &Assignment) -> bool {
    first_unsatisfied(instance, nu).is_none() && nu.num_vars() == instance.num_vars()
}

/// 1-based index of the first clause `nu` falsifies.
fn first_unsatisfied(instance: &CnfInstance, nu: &Assignment) -> Option<usize> {
    instance
        .clauses()
        .iter()
        .position(|c| !c.iter().any(|l| l.eval(nu.value(l.variable))))
        .map(|i| i + 1)
}

/// Largest instance accepted by [`satisfying_assignments`].
pub const MAX_SWEEP_VARIABLES: usize = 24;

/// Every satisfying assignment, by exhaustive sweep. Assignment `m` of the
/// sweep sets `x_i` to bit `i - 1` of `m`.
pub fn satisfying_assignments(instance: &CnfInstance) -> Result<Vec<Assignment>, SizeGuardError> {
    let n = instance.num_vars();
    guard("satisfiability sweep", n, MAX_SWEEP_VARIABLES)?;
    Ok((0u64..1 << n)
        .map(|m| Assignment::from_fn(n, |i| m >> (i - 1) & 1 == 1))
        .filter(|nu| satisfies(instance, nu))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The owner precedes its `ℓ`.
    L,
    /// The owner follows its `ℓ`.
    R,
}

/// L/R label of every owner under some ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideLabels {
    labels: HashMap<Owner, Side>,
}

impl SideLabels {
    pub fn new(labels: HashMap<Owner, Side>) -> Self {
        Self { labels }
    }

    /// Every owner of `instance` labelled `side`.
    pub fn uniform(instance: &CnfInstance, side: Side) -> Self {
        Self::new(owners(instance).into_iter().map(|o| (o, side)).collect())
    }

    pub fn get(&self, owner: Owner) -> Option<Side> {
        self.labels.get(&owner).copied()
    }

    pub fn is_left(&self, owner: Owner) -> bool {
        self.get(owner) == Some(Side::L)
    }
}

pub fn side_labels(r: &ReducedTournament, ord: &Ordering) -> Result<SideLabels, AssignmentError> {
    ord.check_len(r.tournament())?;
    let labels = r
        .blocks()
        .iter()
        .map(|b| {
            let side = if ord.precedes(b.anchor, b.ell()) {
                Side::L
            } else {
                Side::R
            };
            (b.owner, side)
        })
        .collect();
    Ok(SideLabels::new(labels))
}

/// Pairs `(v, x)` that must carry opposite labels: `x` is `v̄` or an
/// occurrence of the literal `v̄` represents.
fn opposed_pairs(instance: &CnfInstance) -> Vec<(Owner, Owner)> {
    let mut pairs = Vec::new();
    for v in owners(instance).into_iter().filter(|o| o.is_var()) {
        let complement = v.complement().expect("variable owner");
        pairs.push((v, complement));
        let lit = crate::reduction::literal_of(instance, complement);
        for (j, l) in instance.literals().enumerate() {
            if l == lit {
                pairs.push((v, Owner::Lit(j + 1)));
            }
        }
    }
    pairs
}

fn first_incoherence(labels: &SideLabels, instance: &CnfInstance) -> Option<(Owner, Owner)> {
    opposed_pairs(instance)
        .into_iter()
        .find(|&(v, x)| match (labels.get(v), labels.get(x)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
}

/// For every variable vertex `v` and every `x` that is `v̄` or an
/// occurrence of the literal of `v̄`, exactly one of `L(v) ∧ R(x)` and
/// `R(v) ∧ L(x)` holds.
pub fn check_coherence(labels: &SideLabels, instance: &CnfInstance) -> bool {
    first_incoherence(labels, instance).is_none()
}

/// Reads a satisfying assignment off a forest-ordering: `x_i` is true iff
/// `v_i ≺ ℓ_{v_i}`. The ordering must be a forest-ordering, and the labels
/// must be coherent and satisfy every clause; for a genuine forest-ordering
/// the last two cannot fail, so they are reported as inconsistencies.
pub fn decode(r: &ReducedTournament, ord: &Ordering) -> Result<Assignment, AssignmentError> {
    let g = backedge_graph(r.tournament(), ord)?;
    if !g.is_forest() {
        return Err(AssignmentError::NotForest);
    }
    let labels = side_labels(r, ord)?;
    if let Some((v, x)) = first_incoherence(&labels, r.instance()) {
        return Err(AssignmentError::Inconsistent(format!(
            "{v} and {x} carry the same side label"
        )));
    }
    let instance = r.instance();
    for c in 0..instance.num_clauses() {
        if !(1..=3).any(|i| labels.is_left(Owner::Lit(3 * c + i))) {
            return Err(AssignmentError::Inconsistent(format!(
                "every literal vertex of clause {} lies right of its ℓ",
                c + 1
            )));
        }
    }
    let nu = Assignment::from_fn(instance.num_vars(), |var| {
        labels.is_left(Owner::Var {
            var,
            positive: true,
        })
    });
    if let Some(clause) = first_unsatisfied(instance, &nu) {
        return Err(AssignmentError::Inconsistent(format!(
            "decoded assignment falsifies clause {clause}"
        )));
    }
    Ok(nu)
}

fn check_satisfying(instance: &CnfInstance, nu: &Assignment) -> Result<(), AssignmentError> {
    if nu.num_vars() != instance.num_vars() {
        return Err(AssignmentError::VariableCount {
            expected: instance.num_vars(),
            got: nu.num_vars(),
        });
    }
    match first_unsatisfied(instance, nu) {
        Some(clause) => Err(AssignmentError::NotSatisfying { clause }),
        None => Ok(()),
    }
}

/// Whether owner `w` is true under `nu`.
fn owner_is_true(r: &ReducedTournament, nu: &Assignment, owner: Owner) -> bool {
    let lit = r.literal_of(owner);
    lit.eval(nu.value(lit.variable))
}

/// Builds the forest-ordering for a satisfying assignment: `≺*` with every
/// false owner moved to just after the last vertex of its `Y` gadget. All
/// other relative positions are kept.
pub fn encode(r: &ReducedTournament, nu: &Assignment) -> Result<Ordering, AssignmentError> {
    check_satisfying(r.instance(), nu)?;
    let n = r.tournament().len();
    let mut skip = vec![false; n];
    let mut insert_after: Vec<Option<VertexId>> = vec![None; n];
    for b in r.blocks() {
        if !owner_is_true(r, nu, b.owner) {
            let last_y = *b.y_vertices().last().expect("Y gadgets are never empty");
            skip[b.anchor] = true;
            insert_after[last_y] = Some(b.anchor);
        }
    }
    let mut sequence = Vec::with_capacity(n);
    for &v in r.star_order().sequence() {
        if !skip[v] {
            sequence.push(v);
        }
        if let Some(anchor) = insert_after[v] {
            sequence.push(anchor);
        }
    }
    let ord = Ordering::new(sequence)?;
    if !backedge_graph(r.tournament(), &ord)?.is_forest() {
        return Err(AssignmentError::Inconsistent(
            "encoded ordering is not a forest-ordering".into(),
        ));
    }
    Ok(ord)
}

/// One stage of the peeling certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStage {
    pub name: &'static str,
    pub steps: Vec<PeelStep>,
}

/// A peeling schedule of `T_I^≺` grouped into the five stages of the
/// forest argument for encoded orderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedPeel {
    pub stages: Vec<PeelStage>,
}

impl StagedPeel {
    pub fn steps(&self) -> impl Iterator<Item = &PeelStep> {
        self.stages.iter().flat_map(|s| s.steps.iter())
    }

    pub fn len(&self) -> usize {
        self.stages.iter().map(|s| s.steps.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Replays all stages in sequence against `T_I^≺`.
    pub fn replays_on(&self, r: &ReducedTournament, ord: &Ordering) -> bool {
        let Ok(g) = backedge_graph(r.tournament(), ord) else {
            return false;
        };
        let steps: Vec<PeelStep> = self.steps().copied().collect();
        replay(&g, &steps, true)
    }
}

pub const PEEL_STAGE_NAMES: [&str; 5] = [
    "magic copies",
    "true N gadgets, false Y gadgets",
    "true Y gadgets, false variable N gadgets, false literal variable parts",
    "variable and true literal vertices",
    "clause paths",
];

/// Peels `T_I^≺` stage by stage:
///
/// 1. `M_x \ {ℓ_x}`, then `ℓ_x`, for every owner;
/// 2. `N_x` of true owners and `Y_x` of false owners;
/// 3. `Y_x` of true owners, `N_v` of false variable vertices, and the
///    comp part of `N_ℓ` for false literal vertices;
/// 4. the vertices of `V` and the true literal vertices;
/// 5. everything left, which is a union of short paths through the clause
///    parts of false literals.
///
/// Within a stage only the stage's vertices are removed, each with at most
/// one remaining neighbour. A stage that cannot remove all of its vertices
/// fails with the stuck set.
pub fn peeling_certificate(
    r: &ReducedTournament,
    ord: &Ordering,
) -> Result<StagedPeel, AssignmentError> {
    let g = backedge_graph(r.tournament(), ord)?;
    let labels = side_labels(r, ord)?;
    let left = |o: Owner| labels.is_left(o);

    let mut stage_sets: Vec<Vec<Vec<VertexId>>> = vec![Vec::new(); 5];
    let mut magic_rest = Vec::new();
    let mut ells = Vec::new();
    let (mut s2, mut s3, mut s4) = (Vec::new(), Vec::new(), Vec::new());
    for b in r.blocks() {
        magic_rest.extend_from_slice(&b.magic[1..]);
        ells.push(b.ell());
        if left(b.owner) {
            s2.extend(b.n_vertices());
            s3.extend(b.y_vertices());
            s4.push(b.anchor);
        } else {
            s2.extend(b.y_vertices());
            if b.owner.is_var() {
                s3.extend(b.n_vertices());
                s4.push(b.anchor);
            } else {
                s3.extend_from_slice(b.n_part(Part::Comp).expect("literal comp part"));
            }
        }
    }
    stage_sets[0] = vec![magic_rest, ells];
    stage_sets[1] = vec![s2];
    stage_sets[2] = vec![s3];
    stage_sets[3] = vec![s4];

    let mut peeler = Peeler::new(&g);
    let mut stages = Vec::with_capacity(5);
    for (index, groups) in stage_sets.into_iter().enumerate() {
        let start = peeler.steps.len();
        let groups = if index == 4 {
            vec![peeler.remaining()]
        } else {
            groups
        };
        for group in groups {
            let stuck = peeler.peel_within(&group);
            if !stuck.is_empty() {
                return Err(AssignmentError::PeelStuck {
                    stage: index + 1,
                    name: PEEL_STAGE_NAMES[index],
                    stuck,
                });
            }
        }
        stages.push(PeelStage {
            name: PEEL_STAGE_NAMES[index],
            steps: peeler.steps[start..].to_vec(),
        });
    }
    Ok(StagedPeel { stages })
}

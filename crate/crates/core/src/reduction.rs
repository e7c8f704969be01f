//! Compiles a 3-CNF instance into an ordered tournament `(T_I, ≺*)`.
//!
//! Every variable polarity and every literal position owns a *block*: an
//! anchor vertex `w` followed by a copy `M_w` of the magic tournament, and a
//! transitive *gadget* `G_w = N_w ⊔ Y_w`. Under `≺*` each block is laid out as
//!
//! ```text
//! w, N_w, ℓ_w, Y_w, M_w \ {ℓ_w}
//! ```
//!
//! where `ℓ_w` is the first vertex of `M_w`. Owners appear in the order
//! `v_1, v̄_1, …, v_n, v̄_n, ℓ_1, …, ℓ_3k`. Vertex ids of the produced
//! tournament are `≺*` positions, so `≺*` is the identity ordering.
//!
//! The construction runs in stages ([`build_base`], [`attach_gadgets`],
//! [`place_and_link`], [`link_gadgets`], [`add_clause_arcs`]) on a
//! [`PartialReduction`] that records the `≺*` sequence of roles and the
//! back-arcs; every arc not recorded is forward.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::{CnfInstance, Literal};
use crate::magic::{MAGIC_MATRIX, MAGIC_SIZE};
use crate::tournament::{
    add_backarc_matching, GraphError, Ordering, Tournament, TournamentBuilder, VertexId,
};

/// Size of one `N` part.
pub const N_PART: usize = 2;
/// Size of one `Y` part, and of a literal's whole `Y`.
pub const Y_PART: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("construction stage `{stage}` requires stage `{requires}` first")]
    StageOrder {
        stage: &'static str,
        requires: &'static str,
    },
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The vertex of `V ∪ L` a block or gadget belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Owner {
    /// `v_i` (`positive`) or `v̄_i`.
    Var { var: usize, positive: bool },
    /// `ℓ_j`, 1-based position in the global literal sequence.
    Lit(usize),
}

impl Owner {
    pub fn is_var(self) -> bool {
        matches!(self, Owner::Var { .. })
    }

    /// The other polarity of a variable owner.
    pub fn complement(self) -> Option<Owner> {
        match self {
            Owner::Var { var, positive } => Some(Owner::Var {
                var,
                positive: !positive,
            }),
            Owner::Lit(_) => None,
        }
    }

    /// Variable owner representing `lit`.
    pub fn for_literal(lit: Literal) -> Owner {
        Owner::Var {
            var: lit.variable,
            positive: !lit.negated,
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Var {
                var,
                positive: true,
            } => write!(f, "v+{var}"),
            Owner::Var {
                var,
                positive: false,
            } => write!(f, "v-{var}"),
            Owner::Lit(j) => write!(f, "l{j}"),
        }
    }
}

/// Named part of a gadget's `N` or `Y` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    /// Variable owner: the part linked with the complementary variable's
    /// gadget. Literal owner: the part linked with the gadget of the
    /// complementary literal's variable vertex (`Y_ℓ` as a whole also uses it).
    Comp,
    /// Variable owner only: the part receiving the `i`-th occurrence (1-based)
    /// of the complementary literal.
    Occ(usize),
    /// Literal owner only: the clause part of `N_ℓ`.
    Clause,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Comp => write!(f, "comp"),
            Part::Occ(i) => write!(f, "occ{i}"),
            Part::Clause => write!(f, "cls"),
        }
    }
}

/// What a vertex of `T_I` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexRole {
    /// An element of `V ∪ L` itself.
    Anchor(Owner),
    /// Vertex `rank` of `M_owner`; rank 0 is `ℓ_owner`.
    Magic { owner: Owner, rank: usize },
    GadgetN {
        owner: Owner,
        part: Part,
        slot: usize,
    },
    GadgetY {
        owner: Owner,
        part: Part,
        slot: usize,
    },
}

impl VertexRole {
    pub fn owner(&self) -> Owner {
        match *self {
            VertexRole::Anchor(owner)
            | VertexRole::Magic { owner, .. }
            | VertexRole::GadgetN { owner, .. }
            | VertexRole::GadgetY { owner, .. } => owner,
        }
    }
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRole::Anchor(owner) => write!(f, "{owner}"),
            VertexRole::Magic { owner, rank } => write!(f, "m:{owner}:{rank}"),
            VertexRole::GadgetN { owner, part, slot } => write!(f, "gn:{owner}:{part}:{slot}"),
            VertexRole::GadgetY { owner, part, slot } => write!(f, "gy:{owner}:{part}:{slot}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed vertex label `{0}`")]
pub struct LabelError(pub String);

fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Owner {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LabelError(s.to_string());
        let (owner, index) = if let Some(rest) = s.strip_prefix("v+") {
            (
                Owner::Var {
                    var: 0,
                    positive: true,
                },
                rest,
            )
        } else if let Some(rest) = s.strip_prefix("v-") {
            (
                Owner::Var {
                    var: 0,
                    positive: false,
                },
                rest,
            )
        } else if let Some(rest) = s.strip_prefix('l') {
            (Owner::Lit(0), rest)
        } else {
            return Err(err());
        };
        let i = parse_index(index).filter(|&i| i >= 1).ok_or_else(err)?;
        Ok(match owner {
            Owner::Var { positive, .. } => Owner::Var { var: i, positive },
            Owner::Lit(_) => Owner::Lit(i),
        })
    }
}

impl FromStr for Part {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "comp" => Ok(Part::Comp),
            "cls" => Ok(Part::Clause),
            _ => s
                .strip_prefix("occ")
                .and_then(parse_index)
                .filter(|&i| i >= 1)
                .map(Part::Occ)
                .ok_or_else(|| LabelError(s.to_string())),
        }
    }
}

impl FromStr for VertexRole {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LabelError(s.to_string());
        let fields: Vec<&str> = s.split(':').collect();
        match fields.as_slice() {
            [owner] => Ok(VertexRole::Anchor(owner.parse().map_err(|_| err())?)),
            ["m", owner, rank] => {
                let rank = parse_index(rank)
                    .filter(|&r| r < MAGIC_SIZE)
                    .ok_or_else(err)?;
                Ok(VertexRole::Magic {
                    owner: owner.parse().map_err(|_| err())?,
                    rank,
                })
            }
            [kind @ ("gn" | "gy"), owner, part, slot] => {
                let owner = owner.parse().map_err(|_| err())?;
                let part = part.parse().map_err(|_| err())?;
                let slot = parse_index(slot).ok_or_else(err)?;
                Ok(if *kind == "gn" {
                    VertexRole::GadgetN { owner, part, slot }
                } else {
                    VertexRole::GadgetY { owner, part, slot }
                })
            }
            _ => Err(err()),
        }
    }
}

/// Bijection between vertex ids and roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleIndex {
    roles: Vec<VertexRole>,
    lookup: HashMap<VertexRole, VertexId>,
}

impl RoleIndex {
    /// Fails if a role appears twice.
    pub fn new(roles: Vec<VertexRole>) -> Result<Self, ReductionError> {
        let mut lookup = HashMap::with_capacity(roles.len());
        for (id, &role) in roles.iter().enumerate() {
            if lookup.insert(role, id).is_some() {
                return Err(ReductionError::Inconsistent(format!(
                    "role {role} assigned twice"
                )));
            }
        }
        Ok(Self { roles, lookup })
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn role(&self, v: VertexId) -> VertexRole {
        self.roles[v]
    }

    pub fn vertex(&self, role: &VertexRole) -> Option<VertexId> {
        self.lookup.get(role).copied()
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn label(&self, v: VertexId) -> String {
        self.roles[v].to_string()
    }
}

/// Number of times `lit` occurs in the instance's literal sequence.
pub fn occurrences(instance: &CnfInstance, lit: Literal) -> usize {
    instance.occurrences(lit)
}

/// Owners in `≺*` order: `v_1, v̄_1, …, v_n, v̄_n, ℓ_1, …, ℓ_3k`.
pub fn owners(instance: &CnfInstance) -> Vec<Owner> {
    let vars = (1..=instance.num_vars()).flat_map(|var| {
        [true, false]
            .into_iter()
            .map(move |positive| Owner::Var { var, positive })
    });
    let lits = (1..=3 * instance.num_clauses()).map(Owner::Lit);
    vars.chain(lits).collect()
}

/// The literal an owner represents.
pub fn literal_of(instance: &CnfInstance, owner: Owner) -> Literal {
    match owner {
        Owner::Var {
            var,
            positive: true,
        } => Literal::positive(var),
        Owner::Var {
            var,
            positive: false,
        } => Literal::negative(var),
        Owner::Lit(j) => instance.clauses()[(j - 1) / 3][(j - 1) % 3],
    }
}

/// Which construction rule produced a back-arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcLayer {
    MagicTree,
    YStar,
    Matching,
    Clause,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BackArc {
    pub from: VertexRole,
    pub to: VertexRole,
    pub layer: ArcLayer,
}

/// Back-arc matching between two equal-size gadget parts, `src` later in `≺*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartMatching {
    pub src: Vec<VertexRole>,
    pub dst: Vec<VertexRole>,
}

/// Part sizes of one gadget, `N` and `Y` sides in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetShape {
    pub owner: Owner,
    pub n_parts: Vec<(Part, usize)>,
    pub y_parts: Vec<(Part, usize)>,
}

impl GadgetShape {
    pub fn n_roles(&self) -> Vec<VertexRole> {
        self.n_parts
            .iter()
            .flat_map(|&(part, size)| {
                (0..size).map(move |slot| VertexRole::GadgetN {
                    owner: self.owner,
                    part,
                    slot,
                })
            })
            .collect()
    }

    pub fn y_roles(&self) -> Vec<VertexRole> {
        self.y_parts
            .iter()
            .flat_map(|&(part, size)| {
                (0..size).map(move |slot| VertexRole::GadgetY {
                    owner: self.owner,
                    part,
                    slot,
                })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_parts
            .iter()
            .chain(&self.y_parts)
            .map(|&(_, s)| s)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Base,
    Attached,
    Placed,
}

/// A construction in progress: the `≺*` sequence of roles placed so far and
/// the back-arcs recorded so far.
#[derive(Clone, Debug)]
pub struct PartialReduction {
    instance: CnfInstance,
    sequence: Vec<VertexRole>,
    gadgets: Vec<GadgetShape>,
    back_arcs: Vec<BackArc>,
    matchings: Vec<PartMatching>,
    stage: Stage,
    linked: bool,
    clauses_linked: bool,
}

impl PartialReduction {
    pub fn instance(&self) -> &CnfInstance {
        &self.instance
    }

    /// Roles in `≺*` order.
    pub fn sequence(&self) -> &[VertexRole] {
        &self.sequence
    }

    pub fn gadgets(&self) -> &[GadgetShape] {
        &self.gadgets
    }

    pub fn back_arcs(&self) -> &[BackArc] {
        &self.back_arcs
    }

    pub fn matchings(&self) -> &[PartMatching] {
        &self.matchings
    }

    fn require(&self, stage: &'static str, requires: Stage) -> Result<(), ReductionError> {
        if self.stage < requires {
            let requires = match requires {
                Stage::Base => "build_base",
                Stage::Attached => "attach_gadgets",
                Stage::Placed => "place_and_link",
            };
            return Err(ReductionError::StageOrder { stage, requires });
        }
        Ok(())
    }

    fn gadget(&self, owner: Owner) -> Result<&GadgetShape, ReductionError> {
        self.gadgets
            .iter()
            .find(|g| g.owner == owner)
            .ok_or_else(|| ReductionError::Inconsistent(format!("no gadget attached to {owner}")))
    }

    fn part_roles(
        &self,
        owner: Owner,
        part: Part,
        y_side: bool,
    ) -> Result<Vec<VertexRole>, ReductionError> {
        let g = self.gadget(owner)?;
        let parts = if y_side { &g.y_parts } else { &g.n_parts };
        let &(_, size) = parts.iter().find(|(p, _)| *p == part).ok_or_else(|| {
            let side = if y_side { "Y" } else { "N" };
            ReductionError::Inconsistent(format!("{owner} has no {side} part `{part}`"))
        })?;
        Ok((0..size)
            .map(|slot| {
                if y_side {
                    VertexRole::GadgetY { owner, part, slot }
                } else {
                    VertexRole::GadgetN { owner, part, slot }
                }
            })
            .collect())
    }

    fn add_matching(
        &mut self,
        src: Vec<VertexRole>,
        dst: Vec<VertexRole>,
    ) -> Result<(), ReductionError> {
        if src.len() != dst.len() {
            return Err(ReductionError::Inconsistent(format!(
                "matching from {} ({} vertices) to {} ({} vertices)",
                src[0],
                src.len(),
                dst[0],
                dst.len()
            )));
        }
        self.matchings.push(PartMatching { src, dst });
        Ok(())
    }

    /// Materialises the tournament described so far. Vertex `i` is the
    /// `i`-th role of [`Self::sequence`], so `≺*` is the identity.
    pub fn snapshot(&self) -> Result<(Tournament, RoleIndex), ReductionError> {
        let roles = RoleIndex::new(self.sequence.clone())?;
        let id = |role: &VertexRole| {
            roles
                .vertex(role)
                .ok_or_else(|| ReductionError::Inconsistent(format!("role {role} is not placed")))
        };
        let mut builder = TournamentBuilder::new(roles.len());
        for arc in &self.back_arcs {
            let (from, to) = (id(&arc.from)?, id(&arc.to)?);
            if from < to {
                return Err(ReductionError::Inconsistent(format!(
                    "{} -> {} is not a back-arc under ≺*",
                    arc.from, arc.to
                )));
            }
            builder.orient(from, to)?;
        }
        let star = Ordering::identity(roles.len());
        for m in &self.matchings {
            let src = m.src.iter().map(id).collect::<Result<Vec<_>, _>>()?;
            let dst = m.dst.iter().map(id).collect::<Result<Vec<_>, _>>()?;
            add_backarc_matching(&mut builder, &src, &dst, &star)?;
        }
        Ok((builder.build(), roles))
    }
}

/// The base tournament: each owner followed by its magic copy, internally
/// ordered by the copy's unique forest-ordering; everything else forward.
pub fn build_base(instance: &CnfInstance) -> PartialReduction {
    let mut sequence = Vec::new();
    let mut back_arcs = Vec::new();
    for owner in owners(instance) {
        sequence.push(VertexRole::Anchor(owner));
        sequence.extend((0..MAGIC_SIZE).map(|rank| VertexRole::Magic { owner, rank }));
        for (later, row) in MAGIC_MATRIX.iter().enumerate() {
            for (earlier, &back) in row[..later].iter().enumerate() {
                if back {
                    back_arcs.push(BackArc {
                        from: VertexRole::Magic { owner, rank: later },
                        to: VertexRole::Magic {
                            owner,
                            rank: earlier,
                        },
                        layer: ArcLayer::MagicTree,
                    });
                }
            }
        }
    }
    PartialReduction {
        instance: instance.clone(),
        sequence,
        gadgets: Vec::new(),
        back_arcs,
        matchings: Vec::new(),
        stage: Stage::Base,
        linked: false,
        clauses_linked: false,
    }
}

/// Decides the shape of every gadget. Nothing is placed in `≺*` yet.
pub fn attach_gadgets(mut partial: PartialReduction) -> Result<PartialReduction, ReductionError> {
    partial.require("attach_gadgets", Stage::Base)?;
    if partial.stage != Stage::Base {
        return Err(ReductionError::Inconsistent(
            "gadgets already attached".into(),
        ));
    }
    let instance = &partial.instance;
    partial.gadgets = owners(instance)
        .into_iter()
        .map(|owner| match owner {
            Owner::Var { .. } => {
                let occ = instance.occurrences(literal_of(instance, owner).complement());
                let parts = std::iter::once(Part::Comp).chain((1..=occ).map(Part::Occ));
                GadgetShape {
                    owner,
                    n_parts: parts.clone().map(|p| (p, N_PART)).collect(),
                    y_parts: parts.map(|p| (p, Y_PART)).collect(),
                }
            }
            Owner::Lit(_) => GadgetShape {
                owner,
                n_parts: vec![(Part::Comp, N_PART), (Part::Clause, N_PART)],
                y_parts: vec![(Part::Comp, Y_PART)],
            },
        })
        .collect();
    partial.stage = Stage::Attached;
    Ok(partial)
}

/// Inserts every gadget into `≺*` as `w, N_w, ℓ_w, Y_w, M_w \ {ℓ_w}` and
/// adds `Y_w => w`, the only backward arcs between a gadget and its block.
pub fn place_and_link(mut partial: PartialReduction) -> Result<PartialReduction, ReductionError> {
    partial.require("place_and_link", Stage::Attached)?;
    if partial.stage != Stage::Attached {
        return Err(ReductionError::Inconsistent(
            "gadgets already placed".into(),
        ));
    }
    let mut sequence = Vec::with_capacity(partial.sequence.len() * 3);
    for owner in owners(&partial.instance) {
        let g = partial.gadget(owner)?;
        let (n_roles, y_roles) = (g.n_roles(), g.y_roles());
        sequence.push(VertexRole::Anchor(owner));
        sequence.extend(n_roles);
        sequence.push(VertexRole::Magic { owner, rank: 0 });
        sequence.extend(y_roles.iter().copied());
        sequence.extend((1..MAGIC_SIZE).map(|rank| VertexRole::Magic { owner, rank }));
        partial
            .back_arcs
            .extend(y_roles.into_iter().map(|y| BackArc {
                from: y,
                to: VertexRole::Anchor(owner),
                layer: ArcLayer::YStar,
            }));
    }
    if sequence.len()
        != partial.sequence.len() + partial.gadgets.iter().map(GadgetShape::len).sum::<usize>()
    {
        return Err(ReductionError::Inconsistent(
            "placement lost or duplicated vertices".into(),
        ));
    }
    partial.sequence = sequence;
    partial.stage = Stage::Placed;
    Ok(partial)
}

/// Adds the back-arc matchings between gadgets.
///
/// 1. The `i`-th occurrence `ℓ` of a literal `p` is matched into the gadget
///    of the variable vertex of `¬p`: `N_ℓ^comp -> N^occ(i)` and
///    `Y_ℓ -> Y^occ(i)`.
/// 2. For each variable, `G_{v̄_i}`'s comp parts are matched into `G_{v_i}`'s.
pub fn link_gadgets(mut partial: PartialReduction) -> Result<PartialReduction, ReductionError> {
    partial.require("link_gadgets", Stage::Placed)?;
    if partial.linked {
        return Err(ReductionError::Inconsistent(
            "gadgets already linked".into(),
        ));
    }
    let literals: Vec<Literal> = partial.instance.literals().collect();
    let mut seen: HashMap<Literal, usize> = HashMap::new();
    for (index, lit) in literals.into_iter().enumerate() {
        let occurrence = {
            let count = seen.entry(lit).or_insert(0);
            *count += 1;
            *count
        };
        let source = Owner::Lit(index + 1);
        let target = Owner::for_literal(lit.complement());
        for y_side in [false, true] {
            let src = partial.part_roles(source, Part::Comp, y_side)?;
            let dst = partial.part_roles(target, Part::Occ(occurrence), y_side)?;
            partial.add_matching(src, dst)?;
        }
    }
    for var in 1..=partial.instance.num_vars() {
        let positive = Owner::Var {
            var,
            positive: true,
        };
        let negative = Owner::Var {
            var,
            positive: false,
        };
        for y_side in [false, true] {
            let src = partial.part_roles(negative, Part::Comp, y_side)?;
            let dst = partial.part_roles(positive, Part::Comp, y_side)?;
            partial.add_matching(src, dst)?;
        }
    }
    partial.linked = true;
    Ok(partial)
}

/// Adds, for each clause `(a ∨ b ∨ c)` with clause parts `(a1, a2)`,
/// `(b1, b2)`, `(c1, c2)`, the back-arcs `b1 -> a2`, `c1 -> b2`, `c2 -> a1`.
pub fn add_clause_arcs(mut partial: PartialReduction) -> Result<PartialReduction, ReductionError> {
    partial.require("add_clause_arcs", Stage::Placed)?;
    if partial.clauses_linked {
        return Err(ReductionError::Inconsistent(
            "clause arcs already added".into(),
        ));
    }
    let slot = |j: usize, slot: usize| VertexRole::GadgetN {
        owner: Owner::Lit(j),
        part: Part::Clause,
        slot,
    };
    for c in 0..partial.instance.num_clauses() {
        let (a, b, cc) = (3 * c + 1, 3 * c + 2, 3 * c + 3);
        for (from, to) in [
            (slot(b, 0), slot(a, 1)),
            (slot(cc, 0), slot(b, 1)),
            (slot(cc, 1), slot(a, 0)),
        ] {
            partial.back_arcs.push(BackArc {
                from,
                to,
                layer: ArcLayer::Clause,
            });
        }
    }
    partial.clauses_linked = true;
    Ok(partial)
}

/// Vertex ids of one block and its gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub owner: Owner,
    pub anchor: VertexId,
    /// `M_owner` by rank; `magic[0]` is `ℓ_owner`.
    pub magic: [VertexId; MAGIC_SIZE],
    pub n_parts: Vec<(Part, Vec<VertexId>)>,
    pub y_parts: Vec<(Part, Vec<VertexId>)>,
}

impl BlockLayout {
    pub fn ell(&self) -> VertexId {
        self.magic[0]
    }

    pub fn n_vertices(&self) -> Vec<VertexId> {
        self.n_parts
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    pub fn y_vertices(&self) -> Vec<VertexId> {
        self.y_parts
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }

    pub fn n_part(&self, part: Part) -> Option<&[VertexId]> {
        self.n_parts
            .iter()
            .find(|(p, _)| *p == part)
            .map(|(_, v)| v.as_slice())
    }

    pub fn y_part(&self, part: Part) -> Option<&[VertexId]> {
        self.y_parts
            .iter()
            .find(|(p, _)| *p == part)
            .map(|(_, v)| v.as_slice())
    }

    /// `B_w = {w} ∪ M_w`.
    pub fn block_vertices(&self) -> Vec<VertexId> {
        std::iter::once(self.anchor).chain(self.magic).collect()
    }
}

/// The complete reduction output.
#[derive(Clone, Debug)]
pub struct ReducedTournament {
    tournament: Tournament,
    roles: RoleIndex,
    star_order: Ordering,
    instance: CnfInstance,
    blocks: Vec<BlockLayout>,
}

impl ReducedTournament {
    fn assemble(partial: &PartialReduction) -> Result<Self, ReductionError> {
        let (tournament, roles) = partial.snapshot()?;
        let id = |role: VertexRole| {
            roles
                .vertex(&role)
                .ok_or_else(|| ReductionError::Inconsistent(format!("role {role} missing")))
        };
        let mut blocks = Vec::new();
        for g in &partial.gadgets {
            let owner = g.owner;
            let mut magic = [0; MAGIC_SIZE];
            for (rank, slot) in magic.iter_mut().enumerate() {
                *slot = id(VertexRole::Magic { owner, rank })?;
            }
            let side = |parts: &[(Part, usize)], y_side: bool| {
                parts
                    .iter()
                    .map(|&(part, size)| {
                        let ids = (0..size)
                            .map(|slot| {
                                id(if y_side {
                                    VertexRole::GadgetY { owner, part, slot }
                                } else {
                                    VertexRole::GadgetN { owner, part, slot }
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok((part, ids))
                    })
                    .collect::<Result<Vec<_>, ReductionError>>()
            };
            blocks.push(BlockLayout {
                owner,
                anchor: id(VertexRole::Anchor(owner))?,
                magic,
                n_parts: side(&g.n_parts, false)?,
                y_parts: side(&g.y_parts, true)?,
            });
        }
        let star_order = Ordering::identity(tournament.len());
        Ok(Self {
            tournament,
            roles,
            star_order,
            instance: partial.instance.clone(),
            blocks,
        })
    }

    pub fn tournament(&self) -> &Tournament {
        &self.tournament
    }

    pub fn roles(&self) -> &RoleIndex {
        &self.roles
    }

    /// `≺*`.
    pub fn star_order(&self) -> &Ordering {
        &self.star_order
    }

    pub fn instance(&self) -> &CnfInstance {
        &self.instance
    }

    /// Blocks in `≺*` order of their owners.
    pub fn blocks(&self) -> &[BlockLayout] {
        &self.blocks
    }

    pub fn block(&self, owner: Owner) -> &BlockLayout {
        &self.blocks[self.owner_index(owner)]
    }

    fn owner_index(&self, owner: Owner) -> usize {
        match owner {
            Owner::Var { var, positive } => 2 * (var - 1) + usize::from(!positive),
            Owner::Lit(j) => 2 * self.instance.num_vars() + j - 1,
        }
    }

    pub fn literal_of(&self, owner: Owner) -> Literal {
        literal_of(&self.instance, owner)
    }

    pub fn vertex(&self, role: &VertexRole) -> Option<VertexId> {
        self.roles.vertex(role)
    }
}

/// Runs the whole construction.
pub fn reduce(instance: &CnfInstance) -> Result<ReducedTournament, ReductionError> {
    let partial = build_base(instance);
    let partial = attach_gadgets(partial)?;
    let partial = place_and_link(partial)?;
    let partial = link_gadgets(partial)?;
    let partial = add_clause_arcs(partial)?;
    ReducedTournament::assemble(&partial)
}

/// `|V(T_I)| = 32n + 75k`.
pub fn expected_vertex_count(instance: &CnfInstance) -> usize {
    32 * instance.num_vars() + 75 * instance.num_clauses()
}

//! Propositional CNF compilation of S5-NF formulas.
//!
//! All encodings ground the Skolemised formula over worlds `0..n`, where
//! world `j >= 1` belongs to diamond `j`. `he` enforces every box at every
//! world. `full` guards box enforcement at world `j` by `d_j` and a fresh
//! `implied_j` atom that records that diamond `j` already holds at world 0.
//! `reach` keeps a box clause at world `j` only when the box is reachable
//! from diamond `j`'s literals through unit propagation over box bodies.
//! On top of `reach`, the conflicts/boxes enrichments add clauses for
//! box-diamond conflicts and box subset pairs, and the diamonds enrichment
//! merges subset-related diamonds into shared worlds and widens the
//! `implied` definitions by superset diamond selectors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{complement_set, Atom, PropLiteral};
use crate::s5nf::S5Nf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodingKind {
    He,
    Full,
    Reach,
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingKind::He => "he",
            EncodingKind::Full => "full",
            EncodingKind::Reach => "reach",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnrichmentSet {
    pub conflicts: bool,
    pub boxes: bool,
    pub diamonds: bool,
}

impl EnrichmentSet {
    pub fn none() -> EnrichmentSet {
        EnrichmentSet::default()
    }

    pub fn all() -> EnrichmentSet {
        EnrichmentSet { conflicts: true, boxes: true, diamonds: true }
    }

    pub fn is_empty(&self) -> bool {
        !(self.conflicts || self.boxes || self.diamonds)
    }
}

/// Tagged meaning of a SAT variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarName {
    /// Truth of `atom` at world `w` (0 is the designated world).
    WorldAtom(Atom, u32),
    /// Selector `b_i` of box literal `i`.
    BoxSel(u32),
    /// Selector `d_j` of diamond literal `j`.
    DiamondSel(u32),
    /// `implied_j`: diamond `j` needs no world of its own.
    Implied(u32),
    /// `sel_j`: diamond `j`'s body holds at world 0 (widened `implied`).
    Sel(u32),
    /// Unnamed variable of a raw instance.
    Opaque(u32),
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::WorldAtom(a, w) => write!(f, "{}@{w}", a.name),
            VarName::BoxSel(i) => write!(f, "b{i}"),
            VarName::DiamondSel(j) => write!(f, "d{j}"),
            VarName::Implied(j) => write!(f, "implied{j}"),
            VarName::Sel(j) => write!(f, "sel{j}"),
            VarName::Opaque(v) => write!(f, "v{v}"),
        }
    }
}

/// Bijection between positive variable indices and tagged names. Variables
/// are allocated lazily, so instances never mention world-atom pairs that no
/// clause constrains.
#[derive(Clone, Debug, Default)]
pub struct VarMap {
    names: Vec<VarName>,
    index: BTreeMap<VarName, i32>,
}

impl VarMap {
    pub fn new() -> VarMap {
        VarMap::default()
    }

    pub fn intern(&mut self, name: VarName) -> i32 {
        if let Some(&v) = self.index.get(&name) {
            return v;
        }
        let v = self.names.len() as i32 + 1;
        self.names.push(name.clone());
        self.index.insert(name, v);
        v
    }

    pub fn lookup(&self, name: &VarName) -> Option<i32> {
        self.index.get(name).copied()
    }

    /// Name of variable `v` (1-based).
    pub fn name(&self, v: i32) -> &VarName {
        &self.names[(v - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &VarName)> {
        self.names.iter().enumerate().map(|(k, n)| (k as i32 + 1, n))
    }
}

/// One world of the encoding: the diamonds materialised there. The
/// representative (the largest body) names the world index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldGroup {
    pub representative: u32,
    pub members: Vec<u32>,
}

/// Disjoint cover of all diamond ids by worlds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldPartition {
    pub groups: Vec<WorldGroup>,
}

impl WorldPartition {
    fn identity(n: usize) -> WorldPartition {
        WorldPartition {
            groups: (1..=n as u32)
                .map(|j| WorldGroup { representative: j, members: alloc::vec![j] })
                .collect(),
        }
    }

    /// World index assigned to each diamond id.
    pub fn world_of(&self) -> BTreeMap<u32, u32> {
        let mut map = BTreeMap::new();
        for g in &self.groups {
            for &m in &g.members {
                map.insert(m, g.representative);
            }
        }
        map
    }
}

/// Greedy world merging: diamonds sorted by decreasing body size (ties by
/// ascending id) join the first world whose members' bodies are all
/// supersets of their own, otherwise open a new world.
pub fn compute_worlds(nf: &S5Nf) -> WorldPartition {
    let mut order: Vec<u32> = (1..=nf.diamond_count() as u32).collect();
    order.sort_by(|a, b| {
        let (sa, sb) = (nf.diamond_lits(*a).len(), nf.diamond_lits(*b).len());
        sb.cmp(&sa).then(a.cmp(b))
    });
    let mut groups: Vec<WorldGroup> = Vec::new();
    'next: for id in order {
        let lits = nf.diamond_lits(id);
        for g in groups.iter_mut() {
            if g.members.iter().all(|m| lits.is_subset(nf.diamond_lits(*m))) {
                g.members.push(id);
                continue 'next;
            }
        }
        groups.push(WorldGroup { representative: id, members: alloc::vec![id] });
    }
    WorldPartition { groups }
}

/// Least fixpoint of unit propagation from `seed` through box bodies: for
/// every literal in the set whose complement occurs in a box body, the rest
/// of that body joins the set.
pub fn up_closure(seed: &BTreeSet<PropLiteral>, nf: &S5Nf) -> BTreeSet<PropLiteral> {
    let mut out = seed.clone();
    let mut frontier: Vec<PropLiteral> = out.iter().cloned().collect();
    while let Some(lit) = frontier.pop() {
        let comp = lit.complement();
        for body in &nf.box_bodies {
            if body.contains(&comp) {
                for other in body {
                    if *other != comp && out.insert(other.clone()) {
                        frontier.push(other.clone());
                    }
                }
            }
        }
    }
    out
}

/// Per-literal closures and the reached box sets `B_j`.
#[derive(Clone, Debug)]
pub struct ReachIndex {
    /// Closure per origin literal, for every literal of a diamond body.
    pub up: BTreeMap<PropLiteral, BTreeSet<PropLiteral>>,
    /// `B_j`: boxes whose bodies intersect the complemented closure of
    /// diamond `j`'s literals.
    pub reached_boxes: BTreeMap<u32, BTreeSet<u32>>,
}

pub fn reach_sets(nf: &S5Nf) -> ReachIndex {
    let mut up: BTreeMap<PropLiteral, BTreeSet<PropLiteral>> = BTreeMap::new();
    for body in &nf.diamond_bodies {
        for lit in body {
            if !up.contains_key(lit) {
                let seed: BTreeSet<PropLiteral> = [lit.clone()].into_iter().collect();
                up.insert(lit.clone(), up_closure(&seed, nf));
            }
        }
    }
    let mut reached_boxes = BTreeMap::new();
    for j in 1..=nf.diamond_count() as u32 {
        let mut closure: BTreeSet<PropLiteral> = BTreeSet::new();
        for lit in nf.diamond_lits(j) {
            closure.extend(up[lit].iter().cloned());
        }
        let comp = complement_set(&closure);
        let set: BTreeSet<u32> = (1..=nf.box_count() as u32)
            .filter(|i| !comp.is_disjoint(nf.box_lits(*i)))
            .collect();
        reached_boxes.insert(j, set);
    }
    ReachIndex { up, reached_boxes }
}

/// Everything model extraction needs to know about the encoding.
#[derive(Clone, Debug)]
pub struct ModalMeta {
    pub boxes: Vec<BTreeSet<PropLiteral>>,
    pub diamonds: Vec<BTreeSet<PropLiteral>>,
    pub worlds: Vec<WorldGroup>,
    pub atoms: BTreeSet<Atom>,
}

/// An integer-literal CNF with its variable map. Built once, never mutated;
/// the enrichment operations return extended copies.
#[derive(Clone, Debug)]
pub struct CnfInstance {
    pub clauses: Vec<Vec<i32>>,
    pub varmap: VarMap,
    pub kind: EncodingKind,
    pub enrichments: EnrichmentSet,
    pub trivially_unsat: bool,
    pub meta: Option<ModalMeta>,
}

impl CnfInstance {
    /// Wraps raw integer clauses; variables get opaque names.
    pub fn from_raw(clauses: Vec<Vec<i32>>) -> CnfInstance {
        let mut varmap = VarMap::new();
        let maxvar = clauses
            .iter()
            .flat_map(|c| c.iter())
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0);
        for v in 1..=maxvar {
            varmap.intern(VarName::Opaque(v));
        }
        let trivially_unsat = clauses.iter().any(|c| c.is_empty());
        CnfInstance {
            clauses,
            varmap,
            kind: EncodingKind::He,
            enrichments: EnrichmentSet::none(),
            trivially_unsat,
            meta: None,
        }
    }

    pub fn var_count(&self) -> usize {
        self.varmap.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// Clauses with literals spelled out by name, e.g. `-b1` or `p@2`.
    /// Mostly for tests and debugging.
    pub fn decoded_clauses(&self) -> Vec<Vec<String>> {
        self.clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| {
                        let name = self.varmap.name(l.abs());
                        if l < 0 {
                            alloc::format!("-{name}")
                        } else {
                            alloc::format!("{name}")
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

struct Builder {
    map: VarMap,
    clauses: Vec<Vec<i32>>,
}

impl Builder {
    fn world_atom(&mut self, atom: &Atom, w: u32) -> i32 {
        self.map.intern(VarName::WorldAtom(atom.clone(), w))
    }

    fn lit_at(&mut self, lit: &PropLiteral, w: u32) -> i32 {
        let v = self.world_atom(&lit.atom, w);
        if lit.positive {
            v
        } else {
            -v
        }
    }

    fn box_sel(&mut self, i: u32) -> i32 {
        self.map.intern(VarName::BoxSel(i))
    }

    fn diamond_sel(&mut self, j: u32) -> i32 {
        self.map.intern(VarName::DiamondSel(j))
    }

    fn implied(&mut self, j: u32) -> i32 {
        self.map.intern(VarName::Implied(j))
    }

    fn body_at(&mut self, body: &BTreeSet<PropLiteral>, w: u32, into: &mut Vec<i32>) {
        for lit in body {
            let l = self.lit_at(lit, w);
            into.push(l);
        }
    }

    fn push(&mut self, clause: Vec<i32>) {
        self.clauses.push(clause);
    }
}

fn trivially_unsat_instance(nf: &S5Nf, kind: EncodingKind, enr: EnrichmentSet) -> CnfInstance {
    CnfInstance {
        clauses: alloc::vec![Vec::new()],
        varmap: VarMap::new(),
        kind,
        enrichments: enr,
        trivially_unsat: true,
        meta: Some(ModalMeta {
            boxes: nf.box_bodies.clone(),
            diamonds: nf.diamond_bodies.clone(),
            worlds: Vec::new(),
            atoms: nf.atoms.clone(),
        }),
    }
}

/// Diamond ids with a strictly larger body than `j`'s (set inclusion).
/// Bodies are merged at construction, so distinct ids never tie.
fn superset_diamonds(nf: &S5Nf, j: u32) -> Vec<u32> {
    let mine = nf.diamond_lits(j);
    (1..=nf.diamond_count() as u32)
        .filter(|&i| i != j && mine.is_subset(nf.diamond_lits(i)))
        .collect()
}

fn build(nf: &S5Nf, kind: EncodingKind, merge_worlds: bool) -> CnfInstance {
    let enr = EnrichmentSet { diamonds: merge_worlds, ..EnrichmentSet::none() };
    if nf.is_trivially_false() {
        return trivially_unsat_instance(nf, kind, enr);
    }
    let m = nf.box_count() as u32;
    let n = nf.diamond_count() as u32;
    let partition = if merge_worlds {
        compute_worlds(nf)
    } else {
        WorldPartition::identity(n as usize)
    };
    let world_of = partition.world_of();
    let reach = match kind {
        EncodingKind::Reach => Some(reach_sets(nf)),
        _ => None,
    };
    // Boxes enforced per world: with merged worlds the reached sets of all
    // members of the world are pooled.
    let enforced_at: BTreeMap<u32, BTreeSet<u32>> = match &reach {
        Some(idx) => partition
            .groups
            .iter()
            .map(|g| {
                let mut set = BTreeSet::new();
                for member in &g.members {
                    set.extend(idx.reached_boxes[member].iter().copied());
                }
                (g.representative, set)
            })
            .collect(),
        None => partition
            .groups
            .iter()
            .map(|g| (g.representative, (1..=m).collect()))
            .collect(),
    };

    let mut b = Builder { map: VarMap::new(), clauses: Vec::new() };

    // the S5-clauses themselves, at world 0
    for clause in &nf.clauses {
        let mut out = Vec::with_capacity(clause.disjuncts.len());
        for d in &clause.disjuncts {
            match d {
                crate::s5nf::S5Literal::Prop(l) => {
                    let lit = b.lit_at(l, 0);
                    out.push(lit);
                }
                crate::s5nf::S5Literal::BoxLit { id, .. } => {
                    let lit = b.box_sel(*id);
                    out.push(lit);
                }
                crate::s5nf::S5Literal::DiamondLit { id, .. } => {
                    let lit = b.diamond_sel(*id);
                    out.push(lit);
                }
            }
        }
        b.push(out);
    }

    // box enforcement: unconditional at world 0, per-kind at diamond worlds
    for i in 1..=m {
        let body = nf.box_lits(i).clone();
        let bi = b.box_sel(i);
        let mut zero = alloc::vec![-bi];
        b.body_at(&body, 0, &mut zero);
        b.push(zero);
        for j in 1..=n {
            let w = world_of[&j];
            match kind {
                EncodingKind::He => {
                    let mut c = alloc::vec![-bi];
                    b.body_at(&body, j, &mut c);
                    b.push(c);
                }
                EncodingKind::Full => {
                    let dj = b.diamond_sel(j);
                    let imp = b.implied(j);
                    let mut c = alloc::vec![-bi, -dj, imp];
                    b.body_at(&body, j, &mut c);
                    b.push(c);
                }
                EncodingKind::Reach => {
                    if enforced_at[&w].contains(&i) {
                        let dj = b.diamond_sel(j);
                        let imp = b.implied(j);
                        let mut c = alloc::vec![-bi, -dj, imp];
                        b.body_at(&body, w, &mut c);
                        b.push(c);
                    }
                }
            }
        }
    }

    // diamond bodies at their worlds
    for j in 1..=n {
        let w = world_of[&j];
        let dj = b.diamond_sel(j);
        let body = nf.diamond_lits(j).clone();
        for lit in &body {
            let l = b.lit_at(lit, w);
            b.push(alloc::vec![-dj, l]);
        }
    }

    // implied definitions
    if kind != EncodingKind::He {
        for j in 1..=n {
            let body = nf.diamond_lits(j).clone();
            let imp = b.implied(j);
            let supersets = if merge_worlds { superset_diamonds(nf, j) } else { Vec::new() };
            if supersets.is_empty() {
                // implied_j <-> body(0)
                for lit in &body {
                    let l = b.lit_at(lit, 0);
                    b.push(alloc::vec![-imp, l]);
                }
                let mut back = alloc::vec![imp];
                for lit in &body {
                    let l = b.lit_at(&lit.complement(), 0);
                    back.push(l);
                }
                b.push(back);
            } else {
                // implied_j <-> body(0) | d_i1 | ... | d_ik, clausified with
                // a helper `sel_j` standing for body(0)
                let sel = b.map.intern(VarName::Sel(j));
                let mut fwd = alloc::vec![-imp];
                for &i in &supersets {
                    let di = b.diamond_sel(i);
                    fwd.push(di);
                }
                fwd.push(sel);
                b.push(fwd);
                for lit in &body {
                    let l = b.lit_at(lit, 0);
                    b.push(alloc::vec![-sel, l]);
                }
                let mut back = alloc::vec![imp];
                for lit in &body {
                    let l = b.lit_at(&lit.complement(), 0);
                    back.push(l);
                }
                b.push(back);
                for &i in &supersets {
                    let di = b.diamond_sel(i);
                    b.push(alloc::vec![imp, -di]);
                }
            }
            let dj = b.diamond_sel(j);
            b.push(alloc::vec![-imp, dj]);
        }
    }

    CnfInstance {
        clauses: b.clauses,
        varmap: b.map,
        kind,
        enrichments: enr,
        trivially_unsat: false,
        meta: Some(ModalMeta {
            boxes: nf.box_bodies.clone(),
            diamonds: nf.diamond_bodies.clone(),
            worlds: partition.groups,
            atoms: nf.atoms.clone(),
        }),
    }
}

/// Herbrand expansion: boxes enforced at every world `0..n`, diamonds at
/// their own worlds, S5-clauses at world 0.
pub fn encode_he(nf: &S5Nf) -> CnfInstance {
    build(nf, EncodingKind::He, false)
}

/// Like `he`, but box enforcement at world `j` is conditional on `d_j` being
/// selected and not already implied at world 0.
pub fn encode_full(nf: &S5Nf) -> CnfInstance {
    build(nf, EncodingKind::Full, false)
}

/// Like `full`, minus box clauses at worlds whose diamond cannot reach the
/// box through unit propagation. Unconstrained world-atom pairs are not
/// allocated at all.
pub fn encode_reach(nf: &S5Nf) -> CnfInstance {
    build(nf, EncodingKind::Reach, false)
}

/// `reach` over merged worlds (subset-related diamonds share one world)
/// with `implied` widened by superset diamond selectors.
pub fn apply_diamonds(nf: &S5Nf) -> CnfInstance {
    build(nf, EncodingKind::Reach, true)
}

/// Adds `~b_i | ~d_j` for every box/diamond pair that cannot hold together
/// (the complemented box body is contained in the diamond body).
pub fn apply_conflicts(c: &CnfInstance, nf: &S5Nf) -> CnfInstance {
    let mut out = c.clone();
    out.enrichments.conflicts = true;
    if out.trivially_unsat {
        return out;
    }
    for i in 1..=nf.box_count() as u32 {
        let comp = complement_set(nf.box_lits(i));
        for j in 1..=nf.diamond_count() as u32 {
            if comp.is_subset(nf.diamond_lits(j)) {
                let bi = out.varmap.intern(VarName::BoxSel(i));
                let dj = out.varmap.intern(VarName::DiamondSel(j));
                out.clauses.push(alloc::vec![-bi, -dj]);
            }
        }
    }
    out
}

/// Adds `~b_i | b_j` for every pair of distinct boxes with subset-related
/// bodies.
pub fn apply_boxes(c: &CnfInstance, nf: &S5Nf) -> CnfInstance {
    let mut out = c.clone();
    out.enrichments.boxes = true;
    if out.trivially_unsat {
        return out;
    }
    let m = nf.box_count() as u32;
    for i in 1..=m {
        for j in 1..=m {
            if i != j && nf.box_lits(i).is_subset(nf.box_lits(j)) {
                let bi = out.varmap.intern(VarName::BoxSel(i));
                let bj = out.varmap.intern(VarName::BoxSel(j));
                out.clauses.push(alloc::vec![-bi, bj]);
            }
        }
    }
    out
}

/// One-stop encoding used by the pipeline: `kind` plus any enrichment
/// subset. The diamonds enrichment implies the merged-world build.
pub fn encode(nf: &S5Nf, kind: EncodingKind, enr: EnrichmentSet) -> CnfInstance {
    let mut out = if enr.diamonds {
        apply_diamonds(nf)
    } else {
        build(nf, kind, false)
    };
    if enr.conflicts {
        out = apply_conflicts(&out, nf);
    }
    if enr.boxes {
        out = apply_boxes(&out, nf);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::s5nf::{nlit, plit, LitSpec, S5NfBuilder};

    fn set(lits: &[PropLiteral]) -> BTreeSet<PropLiteral> {
        lits.iter().cloned().collect()
    }

    /// box(p | q) & dia(p) & dia(~p)
    fn reach_example() -> S5Nf {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![nlit("p")])]);
        b.build()
    }

    #[test]
    fn up_closure_on_reach_example() {
        let nf = reach_example();
        assert_eq!(up_closure(&set(&[plit("p")]), &nf), set(&[plit("p")]));
        assert_eq!(
            up_closure(&set(&[nlit("p")]), &nf),
            set(&[nlit("p"), plit("q")])
        );
        assert_eq!(up_closure(&BTreeSet::new(), &nf), BTreeSet::new());
    }

    #[test]
    fn reach_sets_on_reach_example() {
        let nf = reach_example();
        let idx = reach_sets(&nf);
        assert_eq!(idx.reached_boxes[&1], BTreeSet::new());
        assert_eq!(idx.reached_boxes[&2], [1u32].into_iter().collect());
    }

    #[test]
    fn no_boxes_means_empty_reach() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p")])]);
        let nf = b.build();
        let idx = reach_sets(&nf);
        assert_eq!(idx.reached_boxes[&1], BTreeSet::new());
    }

    #[test]
    fn compute_worlds_merges_subsets() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![
            plit("p"),
            plit("q"),
            plit("s")
        ])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p"), plit("q")])]);
        let nf = b.build();
        let w = compute_worlds(&nf);
        assert_eq!(w.groups.len(), 1);
        assert_eq!(w.groups[0].representative, 1);
        assert_eq!(w.groups[0].members, alloc::vec![1, 2]);
    }

    #[test]
    fn compute_worlds_keeps_incomparable_apart() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![nlit("p")])]);
        let nf = b.build();
        assert_eq!(compute_worlds(&nf).groups.len(), 2);
    }

    #[test]
    fn full_and_reach_counts_on_reach_example() {
        let nf = reach_example();
        let full = encode_full(&nf);
        let reach = encode_reach(&nf);
        assert_eq!(full.clause_count(), 14);
        assert_eq!(reach.clause_count(), 13);
        assert!(reach.var_count() <= full.var_count());
        // q@1 exists in full but is unconstrained in reach
        assert!(full
            .varmap
            .lookup(&VarName::WorldAtom(Atom::source("q"), 1))
            .is_some());
        assert!(reach
            .varmap
            .lookup(&VarName::WorldAtom(Atom::source("q"), 1))
            .is_none());
    }

    #[test]
    fn reach_removes_exactly_the_unreached_clause() {
        let nf = reach_example();
        let full: BTreeSet<BTreeSet<String>> = encode_full(&nf)
            .decoded_clauses()
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        let reach: BTreeSet<BTreeSet<String>> = encode_reach(&nf)
            .decoded_clauses()
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        let missing: Vec<_> = full.difference(&reach).collect();
        let expected: BTreeSet<String> =
            ["-b1", "-d1", "implied1", "p@1", "q@1"].map(String::from).into();
        assert_eq!(missing, alloc::vec![&expected]);
        assert!(reach.difference(&full).next().is_none());
    }

    #[test]
    fn full_without_diamonds_equals_he() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Prop(plit("p"))]);
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        let nf = b.build();
        let he = encode_he(&nf);
        let full = encode_full(&nf);
        assert_eq!(he.clauses, full.clauses);
        assert_eq!(he.var_count(), full.var_count());
    }

    #[test]
    fn reach_with_everything_reached_equals_full() {
        // both diamonds propagate into the box, so nothing is removable
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![nlit("p")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![nlit("q")])]);
        let nf = b.build();
        let idx = reach_sets(&nf);
        assert_eq!(idx.reached_boxes[&1], [1u32].into_iter().collect());
        assert_eq!(idx.reached_boxes[&2], [1u32].into_iter().collect());
        assert_eq!(encode_reach(&nf).clauses, encode_full(&nf).clauses);
    }

    #[test]
    fn reach_sets_on_example1_shape() {
        // box(p | q), dia(p & q), dia(~p & ~q)
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Prop(plit("p"))]);
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![
            LitSpec::Diamond(alloc::vec![plit("p"), plit("q")]),
            LitSpec::Diamond(alloc::vec![nlit("p"), nlit("q")]),
        ]);
        let nf = b.build();
        let idx = reach_sets(&nf);
        assert_eq!(idx.reached_boxes[&1], BTreeSet::new());
        assert_eq!(idx.reached_boxes[&2], [1u32].into_iter().collect());
    }

    #[test]
    fn conflicts_without_pairs_is_unchanged() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p"), plit("s")])]);
        let nf = b.build();
        let base = encode_reach(&nf);
        let enriched = apply_conflicts(&base, &nf);
        assert_eq!(base.clauses, enriched.clauses);
    }

    #[test]
    fn he_with_no_modalities() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Prop(plit("p"))]);
        let nf = b.build();
        let c = encode_he(&nf);
        assert_eq!(c.clauses, alloc::vec![alloc::vec![1]]);
        assert_eq!(c.var_count(), 1);
    }

    #[test]
    fn conflicts_enrichment_adds_pair() {
        // box(~p | ~q) & dia(p & q & s)
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![nlit("p"), nlit("q")])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![
            plit("p"),
            plit("q"),
            plit("s")
        ])]);
        let nf = b.build();
        let base = encode_reach(&nf);
        let enriched = apply_conflicts(&base, &nf);
        assert_eq!(enriched.clause_count(), base.clause_count() + 1);
        let decoded = enriched.decoded_clauses();
        assert!(decoded.contains(&alloc::vec!["-b1".into(), "-d1".into()]));
    }

    #[test]
    fn boxes_enrichment_adds_subset_pair() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![
            plit("p"),
            plit("q"),
            plit("s")
        ])]);
        let nf = b.build();
        let enriched = apply_boxes(&encode_reach(&nf), &nf);
        let decoded = enriched.decoded_clauses();
        assert!(decoded.contains(&alloc::vec!["-b1".into(), "b2".into()]));
        assert!(!decoded.contains(&alloc::vec!["-b2".into(), "b1".into()]));
    }

    #[test]
    fn diamonds_enrichment_widens_implied() {
        // dia(p & q & s) & dia(p & q)
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![
            plit("p"),
            plit("q"),
            plit("s")
        ])]);
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p"), plit("q")])]);
        let nf = b.build();
        let c = apply_diamonds(&nf);
        let decoded = c.decoded_clauses();
        // superset selector forces the smaller diamond to be implied
        assert!(decoded.contains(&alloc::vec!["implied2".into(), "-d1".into()]));
        // both diamonds share world 1 (named by the larger one)
        assert!(c
            .varmap
            .lookup(&VarName::WorldAtom(Atom::source("s"), 1))
            .is_some());
        assert!(c
            .varmap
            .lookup(&VarName::WorldAtom(Atom::source("s"), 2))
            .is_none());
    }

    #[test]
    fn trivially_false_form_encodes_to_empty_clause() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p"), nlit("p")])]);
        let nf = b.build();
        let c = encode_reach(&nf);
        assert!(c.trivially_unsat);
        assert_eq!(c.clauses, alloc::vec![Vec::<i32>::new()]);
    }
}

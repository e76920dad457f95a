//! Kripke models: the semantic evaluator, model reconstruction from SAT
//! assignments, and verification of reconstructed models against the
//! original formula.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::encoder::{CnfInstance, EncodingKind, VarName};
use crate::formula::{Atom, Formula};
use crate::sat::{assignment_satisfies, Assignment};

/// A nonempty list of worlds; each world is the set of true atoms. World 0
/// is the designated world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    pub fn new(worlds: Vec<BTreeSet<Atom>>) -> KripkeModel {
        assert!(!worlds.is_empty(), "a Kripke model needs at least one world");
        KripkeModel { worlds }
    }

    /// Serialises as one line per world: `w<i>: {atom, atom, ...}`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.worlds.iter().enumerate() {
            out.push_str(&alloc::format!("w{i}: {{"));
            for (k, a) in w.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&a.name);
            }
            out.push_str("}\n");
        }
        out
    }
}

impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Satisfaction at world `i`. Boxes quantify over all worlds, diamonds over
/// some world; `->`/`<->` evaluate by their definitions.
///
/// Panics when `i` is out of range.
pub fn evaluate(f: &Formula, model: &KripkeModel, i: usize) -> bool {
    assert!(i < model.worlds.len(), "world index out of range");
    match f {
        Formula::Atom(a) => model.worlds[i].contains(a),
        Formula::Not(g) => !evaluate(g, model, i),
        Formula::And(gs) => gs.iter().all(|g| evaluate(g, model, i)),
        Formula::Or(gs) => gs.iter().any(|g| evaluate(g, model, i)),
        Formula::Implies(a, b) => !evaluate(a, model, i) || evaluate(b, model, i),
        Formula::Iff(a, b) => evaluate(a, model, i) == evaluate(b, model, i),
        Formula::Box(g) => (0..model.worlds.len()).all(|j| evaluate(g, model, j)),
        Formula::Diamond(g) => (0..model.worlds.len()).any(|j| evaluate(g, model, j)),
    }
}

/// Satisfaction at the designated world 0.
pub fn verify(f: &Formula, model: &KripkeModel) -> bool {
    evaluate(f, model, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtractError {
    /// The assignment does not satisfy the instance.
    NotAModel,
    /// The instance carries no modal metadata (raw clauses).
    NoMeta,
}

impl fmt::Display for ExtractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtractError::NotAModel => f.write_str("assignment does not satisfy the instance"),
            ExtractError::NoMeta => f.write_str("instance has no modal metadata"),
        }
    }
}

impl core::error::Error for ExtractError {}

fn world_satisfies(world: &BTreeSet<Atom>, body: &BTreeSet<crate::formula::PropLiteral>) -> bool {
    body.iter().any(|l| world.contains(&l.atom) == l.positive)
}

/// Rebuilds a Kripke model from a satisfying assignment.
///
/// World 0 collects the true world-0 atoms. Each selected, not implied
/// diamond contributes its world; pairs the encoding never allocated
/// inherit world 0's value. The `reach` encodings leave some box bodies
/// unconstrained at diamond worlds, so a repair pass then copies atom
/// values from world 0 (sparing the atoms pinned by the world's active
/// diamonds) until every selected box holds everywhere. Fresh normaliser
/// atoms are projected out and duplicate worlds collapse.
pub fn extract_model(a: &Assignment, c: &CnfInstance) -> Result<KripkeModel, ExtractError> {
    if !assignment_satisfies(&c.clauses, a) {
        return Err(ExtractError::NotAModel);
    }
    let meta = c.meta.as_ref().ok_or(ExtractError::NoMeta)?;
    let truth = |name: VarName| -> Option<bool> { c.varmap.lookup(&name).map(|v| a.value(v)) };
    let atom_at = |atom: &Atom, w: u32, base: &BTreeSet<Atom>| -> bool {
        match truth(VarName::WorldAtom(atom.clone(), w)) {
            Some(v) => v,
            None => base.contains(atom),
        }
    };

    let mut world0: BTreeSet<Atom> = BTreeSet::new();
    for atom in &meta.atoms {
        if truth(VarName::WorldAtom(atom.clone(), 0)) == Some(true) {
            world0.insert(atom.clone());
        }
    }

    // a diamond is active when selected and not implied (he has no implied
    // atoms, so selection alone decides)
    let active = |j: u32| -> bool {
        if truth(VarName::DiamondSel(j)) != Some(true) {
            return false;
        }
        match c.kind {
            EncodingKind::He => true,
            _ => truth(VarName::Implied(j)) != Some(true),
        }
    };

    let mut worlds: Vec<BTreeSet<Atom>> = alloc::vec![world0.clone()];
    let mut pinned: Vec<BTreeSet<Atom>> = alloc::vec![meta.atoms.clone()];
    let mut groups: Vec<&crate::encoder::WorldGroup> =
        meta.worlds.iter().filter(|g| g.members.iter().any(|&j| active(j))).collect();
    groups.sort_by_key(|g| g.representative);
    for g in &groups {
        let w = g.representative;
        let mut world: BTreeSet<Atom> = BTreeSet::new();
        for atom in &meta.atoms {
            if atom_at(atom, w, &world0) {
                world.insert(atom.clone());
            }
        }
        // atoms the active diamonds constrain here must not be repaired
        let mut pin: BTreeSet<Atom> = BTreeSet::new();
        for &j in &g.members {
            if active(j) {
                for lit in &meta.diamonds[(j - 1) as usize] {
                    pin.insert(lit.atom.clone());
                }
            }
        }
        worlds.push(world);
        pinned.push(pin);
    }

    // iterated copy-from-world-0 repair for unenforced boxes
    let selected_boxes: Vec<&BTreeSet<crate::formula::PropLiteral>> = (1..=meta.boxes.len()
        as u32)
        .filter(|&i| truth(VarName::BoxSel(i)) == Some(true))
        .map(|i| &meta.boxes[(i - 1) as usize])
        .collect();
    loop {
        let mut changed = false;
        for body in &selected_boxes {
            for (k, world) in worlds.iter_mut().enumerate().skip(1) {
                if world_satisfies(world, body) {
                    continue;
                }
                for lit in body.iter() {
                    if pinned[k].contains(&lit.atom) {
                        continue;
                    }
                    let want = world0.contains(&lit.atom);
                    let have = world.contains(&lit.atom);
                    if want != have {
                        if want {
                            world.insert(lit.atom.clone());
                        } else {
                            world.remove(&lit.atom);
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(
        selected_boxes
            .iter()
            .all(|b| worlds.iter().all(|w| world_satisfies(w, b))),
        "box repair did not converge"
    );

    // project fresh atoms, then deduplicate worlds
    let mut projected: Vec<BTreeSet<Atom>> = worlds
        .into_iter()
        .map(|w| w.into_iter().filter(|a| !a.is_fresh()).collect())
        .collect();
    let mut seen: BTreeSet<BTreeSet<Atom>> = BTreeSet::new();
    projected.retain(|w| seen.insert(w.clone()));
    Ok(KripkeModel::new(projected))
}

//! Brute-force S5 satisfiability for small inputs; the ground truth the
//! property suites measure everything else against.
//!
//! The search enumerates world counts `k = 1..bound`, where the bound is
//! one plus the number of diamonds in the negation normal form (the worlds
//! a Skolemised model can need), and for each `k` all lists of distinct
//! interpretations with a designated world 0. Worlds beyond index 0 are
//! treated as a set; satisfaction only depends on the world set and the
//! designated world. Evaluation runs on a bitmask representation compiled
//! once per call, independent of the pipeline evaluator.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Atom, Formula};
use crate::kripke::KripkeModel;
use crate::normalizer::to_nnf;

pub const GUARD_MAX_ATOMS: usize = 6;
pub const GUARD_MAX_MODALS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Sat(KripkeModel),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub outcome: OracleOutcome,
    /// Largest world count the search looked at.
    pub explored_bound: usize,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.outcome, OracleOutcome::Sat(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardExceeded {
    pub atoms: usize,
    pub modals: usize,
}

impl fmt::Display for GuardExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "input too large for the brute-force oracle ({} atoms, {} modal operators)",
            self.atoms, self.modals
        )
    }
}

impl core::error::Error for GuardExceeded {}

enum Node {
    Atom(u8),
    Not(u32),
    And(Vec<u32>),
    Or(Vec<u32>),
    Implies(u32, u32),
    Iff(u32, u32),
    Necessary(u32),
    Possible(u32),
}

struct Compiled {
    nodes: Vec<Node>,
    root: u32,
}

fn compile(f: &Formula, atoms: &[Atom], nodes: &mut Vec<Node>) -> u32 {
    let node = match f {
        Formula::Atom(a) => {
            let bit = atoms.iter().position(|x| x == a).expect("atom in universe") as u8;
            Node::Atom(bit)
        }
        Formula::Not(g) => Node::Not(compile(g, atoms, nodes)),
        Formula::And(gs) => Node::And(gs.iter().map(|g| compile(g, atoms, nodes)).collect()),
        Formula::Or(gs) => Node::Or(gs.iter().map(|g| compile(g, atoms, nodes)).collect()),
        Formula::Implies(a, b) => {
            Node::Implies(compile(a, atoms, nodes), compile(b, atoms, nodes))
        }
        Formula::Iff(a, b) => Node::Iff(compile(a, atoms, nodes), compile(b, atoms, nodes)),
        Formula::Box(g) => Node::Necessary(compile(g, atoms, nodes)),
        Formula::Diamond(g) => Node::Possible(compile(g, atoms, nodes)),
    };
    nodes.push(node);
    nodes.len() as u32 - 1
}

fn eval(c: &Compiled, id: u32, world: usize, worlds: &[u32]) -> bool {
    match &c.nodes[id as usize] {
        Node::Atom(bit) => worlds[world] & (1 << bit) != 0,
        Node::Not(g) => !eval(c, *g, world, worlds),
        Node::And(gs) => gs.iter().all(|&g| eval(c, g, world, worlds)),
        Node::Or(gs) => gs.iter().any(|&g| eval(c, g, world, worlds)),
        Node::Implies(a, b) => !eval(c, *a, world, worlds) || eval(c, *b, world, worlds),
        Node::Iff(a, b) => eval(c, *a, world, worlds) == eval(c, *b, world, worlds),
        Node::Necessary(g) => (0..worlds.len()).all(|j| eval(c, *g, j, worlds)),
        Node::Possible(g) => (0..worlds.len()).any(|j| eval(c, *g, j, worlds)),
    }
}

/// Advances `pick` to the next k-combination of `0..r` in lexicographic
/// order; false once exhausted.
fn next_combination(pick: &mut [usize], r: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < r - (k - i) {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn to_model(atoms: &[Atom], worlds: &[u32]) -> KripkeModel {
    KripkeModel::new(
        worlds
            .iter()
            .map(|&mask| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, a)| a.clone())
                    .collect::<BTreeSet<Atom>>()
            })
            .collect(),
    )
}

/// Brute-force decision with explicit guard limits.
pub fn brute_force_with_limits(
    f: &Formula,
    max_worlds: Option<usize>,
    max_atoms: usize,
    max_modals: usize,
) -> Result<OracleVerdict, GuardExceeded> {
    let atom_set = f.atoms();
    let modals = f.modal_count();
    if atom_set.len() > max_atoms || modals > max_modals {
        return Err(GuardExceeded { atoms: atom_set.len(), modals });
    }
    let atoms: Vec<Atom> = atom_set.into_iter().collect();
    let bound = max_worlds
        .unwrap_or_else(|| 1 + to_nnf(f.clone().desugar()).diamond_count())
        .max(1);

    let mut nodes = Vec::new();
    let root = compile(f, &atoms, &mut nodes);
    let compiled = Compiled { nodes, root };

    let universe: u32 = 1u32 << atoms.len();
    let mut worlds: Vec<u32> = Vec::with_capacity(bound);
    for k in 1..=bound {
        for designated in 0..universe {
            // remaining worlds: (k-1)-subsets of the other interpretations,
            // in lexicographic order
            let others: Vec<u32> = (0..universe).filter(|&w| w != designated).collect();
            if k - 1 > others.len() {
                continue;
            }
            let mut pick: Vec<usize> = (0..k - 1).collect();
            loop {
                worlds.clear();
                worlds.push(designated);
                worlds.extend(pick.iter().map(|&i| others[i]));
                if eval(&compiled, compiled.root, 0, &worlds) {
                    let model = to_model(&atoms, &worlds);
                    debug_assert!(crate::kripke::verify(f, &model));
                    return Ok(OracleVerdict {
                        outcome: OracleOutcome::Sat(model),
                        explored_bound: k,
                    });
                }
                if !next_combination(&mut pick, others.len()) {
                    break;
                }
            }
        }
    }
    Ok(OracleVerdict { outcome: OracleOutcome::Unsat, explored_bound: bound })
}

/// Brute-force decision with the default guard (at most 6 atoms and 6 modal
/// operators).
pub fn brute_force(f: &Formula, max_worlds: Option<usize>) -> Result<OracleVerdict, GuardExceeded> {
    brute_force_with_limits(f, max_worlds, GUARD_MAX_ATOMS, GUARD_MAX_MODALS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::verify;
    use crate::parser::{parse, SourceFormat};

    fn native(s: &str) -> Formula {
        parse(s, SourceFormat::Native).unwrap()
    }

    fn decide(s: &str) -> OracleVerdict {
        brute_force(&native(s), None).unwrap()
    }

    #[test]
    fn single_atom() {
        let v = decide("p");
        match &v.outcome {
            OracleOutcome::Sat(m) => {
                assert_eq!(m.worlds.len(), 1);
                assert!(verify(&native("p"), m));
            }
            OracleOutcome::Unsat => panic!("p is satisfiable"),
        }
    }

    #[test]
    fn example_formula_is_sat() {
        let f = native("p & box(p | q) & (dia(p & q) | dia(~p & ~q))");
        let v = brute_force(&f, None).unwrap();
        match &v.outcome {
            OracleOutcome::Sat(m) => assert!(verify(&f, m)),
            OracleOutcome::Unsat => panic!("example formula is satisfiable"),
        }
    }

    #[test]
    fn conflict_example_is_unsat() {
        assert!(!decide("box(~p | ~q) & dia(p & q & s)").is_sat());
    }

    #[test]
    fn modal_contradictions() {
        assert!(!decide("box(p) & dia(~p)").is_sat());
        assert!(decide("box(p | q) & dia(~p) & dia(~q)").is_sat());
        assert!(!decide("p & ~p").is_sat());
    }

    #[test]
    fn guard_rejects_large_inputs() {
        let f = native("a1 & a2 & a3 & a4 & a5 & a6 & a7");
        assert!(brute_force(&f, None).is_err());
    }

    #[test]
    fn paranoid_bound_extension_changes_nothing() {
        let f = native("box(p | q) & dia(~p) & dia(~q)");
        let base = brute_force(&f, None).unwrap();
        let wider = brute_force(&f, Some(base.explored_bound + 1)).unwrap();
        assert_eq!(base.is_sat(), wider.is_sat());
    }
}

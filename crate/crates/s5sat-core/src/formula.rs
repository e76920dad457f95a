//! Formula AST and propositional literals.
//!
//! The grammar is atoms, `~`, `&`, `|`, `->`, `<->`, `box`, `dia`. The
//! implication connectives are sugar and are removed by [`Formula::desugar`]
//! before any other transformation runs.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Prefix of atoms invented during normalisation. User input is not allowed
/// to contain atoms of the form `aux<digits>` so that generated names can
/// never collide with source names.
pub const FRESH_PREFIX: &str = "aux";

/// Returns true for names of the reserved shape `aux<digits>`.
pub fn is_reserved_name(name: &str) -> bool {
    match name.strip_prefix(FRESH_PREFIX) {
        Some(rest) => !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()),
        None => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomOrigin {
    /// Appeared in user input.
    Source,
    /// Invented by the normaliser; the index is the generation counter.
    Fresh(u32),
}

/// A propositional atom. Names are unique within one problem; fresh atoms
/// use [`FRESH_PREFIX`] and a counter, which the parsers reject in input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub origin: AtomOrigin,
}

impl Atom {
    pub fn source(name: &str) -> Atom {
        Atom { name: name.to_string(), origin: AtomOrigin::Source }
    }

    pub fn fresh(index: u32) -> Atom {
        let mut name = String::from(FRESH_PREFIX);
        name.push_str(&index.to_string());
        Atom { name, origin: AtomOrigin::Fresh(index) }
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self.origin, AtomOrigin::Fresh(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An atom or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropLiteral {
    pub atom: Atom,
    pub positive: bool,
}

impl PropLiteral {
    pub fn pos(atom: Atom) -> PropLiteral {
        PropLiteral { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> PropLiteral {
        PropLiteral { atom, positive: false }
    }

    /// Flips the sign; an involution.
    pub fn complement(&self) -> PropLiteral {
        PropLiteral { atom: self.atom.clone(), positive: !self.positive }
    }
}

/// Complements every literal of a set.
pub fn complement_set(lits: &BTreeSet<PropLiteral>) -> BTreeSet<PropLiteral> {
    lits.iter().map(PropLiteral::complement).collect()
}

impl fmt::Display for PropLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        f.write_str(&self.atom.name)
    }
}

/// S5 formula tree. `And`/`Or` are n-ary and always hold at least two
/// children; the smart constructors flatten nested chains of the same
/// connective and collapse single-child lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::source(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// n-ary conjunction; flattens nested `And`s and collapses singletons.
    /// Panics on an empty list (the grammar has no boolean constants).
    pub fn and(parts: Vec<Formula>) -> Formula {
        Self::nary(parts, true)
    }

    /// n-ary disjunction, with the same flattening rules as [`Formula::and`].
    pub fn or(parts: Vec<Formula>) -> Formula {
        Self::nary(parts, false)
    }

    fn nary(parts: Vec<Formula>, conj: bool) -> Formula {
        assert!(!parts.is_empty(), "empty connective");
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match (conj, p) {
                (true, Formula::And(children)) => flat.extend(children),
                (false, Formula::Or(children)) => flat.extend(children),
                (_, other) => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else if conj {
            Formula::And(flat)
        } else {
            Formula::Or(flat)
        }
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Iff(Box::new(lhs), Box::new(rhs))
    }

    pub fn bx(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Diamond(Box::new(f))
    }

    /// Rewrites `->` and `<->` using their definitions, leaving a formula
    /// over atoms, `~`, `&`, `|`, `box` and `dia` only.
    pub fn desugar(self) -> Formula {
        match self {
            Formula::Atom(_) => self,
            Formula::Not(f) => Formula::not(f.desugar()),
            Formula::And(fs) => Formula::and(fs.into_iter().map(Formula::desugar).collect()),
            Formula::Or(fs) => Formula::or(fs.into_iter().map(Formula::desugar).collect()),
            Formula::Implies(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::or(alloc::vec![Formula::not(a), b])
            }
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(alloc::vec![
                    Formula::or(alloc::vec![Formula::not(a.clone()), b.clone()]),
                    Formula::or(alloc::vec![Formula::not(b), a]),
                ])
            }
            Formula::Box(f) => Formula::bx(f.desugar()),
            Formula::Diamond(f) => Formula::dia(f.desugar()),
        }
    }

    /// The set of atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut acc = BTreeSet::new();
        self.collect_atoms(&mut acc);
        acc
    }

    fn collect_atoms(&self, acc: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                acc.insert(a.clone());
            }
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => f.collect_atoms(acc),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_atoms(acc);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(acc);
                b.collect_atoms(acc);
            }
        }
    }

    /// Number of `box`/`dia` nodes in the tree.
    pub fn modal_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::modal_count).sum(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.modal_count() + b.modal_count(),
            Formula::Box(f) | Formula::Diamond(f) => 1 + f.modal_count(),
        }
    }

    /// Number of `dia` nodes in the tree (no negation accounting).
    pub fn diamond_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Box(f) => f.diamond_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::diamond_count).sum(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.diamond_count() + b.diamond_count(),
            Formula::Diamond(f) => 1 + f.diamond_count(),
        }
    }

    /// Total node count.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Box(f) | Formula::Diamond(f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// `Some(lit)` when the formula is an atom or a negated atom.
    pub fn as_prop_literal(&self) -> Option<PropLiteral> {
        match self {
            Formula::Atom(a) => Some(PropLiteral::pos(a.clone())),
            Formula::Not(f) => match f.as_ref() {
                Formula::Atom(a) => Some(PropLiteral::neg(a.clone())),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn from_prop_literal(lit: &PropLiteral) -> Formula {
        let atom = Formula::Atom(lit.atom.clone());
        if lit.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

fn is_prop_disjunction(f: &Formula) -> bool {
    match f {
        Formula::Or(fs) => fs.iter().all(|g| g.as_prop_literal().is_some()),
        _ => f.as_prop_literal().is_some(),
    }
}

fn is_prop_conjunction(f: &Formula) -> bool {
    match f {
        Formula::And(fs) => fs.iter().all(|g| g.as_prop_literal().is_some()),
        _ => f.as_prop_literal().is_some(),
    }
}

fn is_s5_literal(f: &Formula) -> bool {
    match f {
        Formula::Box(body) => is_prop_disjunction(body),
        Formula::Diamond(body) => is_prop_conjunction(body),
        _ => f.as_prop_literal().is_some(),
    }
}

fn is_s5_clause(f: &Formula) -> bool {
    match f {
        Formula::Or(fs) => fs.iter().all(is_s5_literal),
        _ => is_s5_literal(f),
    }
}

/// Syntactic test for S5 normal form: a conjunction of disjunctions whose
/// disjuncts are propositional literals, `box` over a disjunction of
/// literals, or `dia` over a conjunction of literals. Degenerate one-element
/// cases are allowed at every level.
pub fn is_s5nf(f: &Formula) -> bool {
    match f {
        Formula::And(fs) => fs.iter().all(is_s5_clause),
        _ => is_s5_clause(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn complement_is_involution() {
        let lit = PropLiteral::pos(Atom::source("p"));
        assert_eq!(lit.complement().complement(), lit);
        assert_eq!(lit.complement(), PropLiteral::neg(Atom::source("p")));
        let nq = PropLiteral::neg(Atom::source("q"));
        assert_eq!(nq.complement(), PropLiteral::pos(Atom::source("q")));
    }

    #[test]
    fn complement_of_set() {
        let set: BTreeSet<_> = [
            PropLiteral::neg(Atom::source("p")),
            PropLiteral::neg(Atom::source("q")),
        ]
        .into_iter()
        .collect();
        let expected: BTreeSet<_> = [
            PropLiteral::pos(Atom::source("p")),
            PropLiteral::pos(Atom::source("q")),
        ]
        .into_iter()
        .collect();
        assert_eq!(complement_set(&set), expected);
    }

    #[test]
    fn nary_flattening() {
        let f = Formula::and(vec![p(), Formula::and(vec![q(), Formula::atom("r")])]);
        assert_eq!(f, Formula::And(vec![p(), q(), Formula::atom("r")]));
        let g = Formula::or(vec![p()]);
        assert_eq!(g, p());
    }

    #[test]
    fn s5nf_recognises_example_shape() {
        // p & box(p | q) & (dia(p & q) | dia(~p & ~q))
        let f = Formula::and(vec![
            p(),
            Formula::bx(Formula::or(vec![p(), q()])),
            Formula::or(vec![
                Formula::dia(Formula::and(vec![p(), q()])),
                Formula::dia(Formula::and(vec![
                    Formula::not(p()),
                    Formula::not(q()),
                ])),
            ]),
        ]);
        assert!(is_s5nf(&f));
    }

    #[test]
    fn s5nf_rejects_nesting_and_negation() {
        assert!(!is_s5nf(&Formula::bx(Formula::dia(p()))));
        assert!(!is_s5nf(&Formula::not(Formula::and(vec![p(), q()]))));
        assert!(is_s5nf(&p()));
    }

    #[test]
    fn desugar_removes_arrows() {
        let f = Formula::implies(p(), q()).desugar();
        assert_eq!(f, Formula::or(vec![Formula::not(p()), q()]));
        let g = Formula::iff(p(), q()).desugar();
        assert_eq!(
            g,
            Formula::and(vec![
                Formula::or(vec![Formula::not(p()), q()]),
                Formula::or(vec![Formula::not(q()), p()]),
            ])
        );
    }

    #[test]
    fn reserved_names() {
        assert!(is_reserved_name("aux1"));
        assert!(is_reserved_name("aux42"));
        assert!(!is_reserved_name("aux"));
        assert!(!is_reserved_name("auxiliary"));
        assert!(!is_reserved_name("p1"));
    }
}

//! S5 normal form: a conjunction of S5-clauses, each a disjunction of
//! propositional literals, box-literals and diamond-literals.
//!
//! Box and diamond literals are enumerated `b1..bm` and `d1..dn` in order of
//! first occurrence; identical bodies (same operator, same literal set) share
//! one identifier. Degenerate bodies are pruned at construction: a box over
//! complementary literals is a tautology and satisfies its whole clause, a
//! diamond over complementary literals is unsatisfiable and is dropped from
//! its clause. A clause emptied this way makes the whole form trivially
//! false.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Atom, Formula, PropLiteral};

/// One disjunct of an S5-clause. Modal literals carry their 1-based id and
/// their literal set; duplicates inside the set are removed at construction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum S5Literal {
    Prop(PropLiteral),
    BoxLit { id: u32, lits: BTreeSet<PropLiteral> },
    DiamondLit { id: u32, lits: BTreeSet<PropLiteral> },
}

impl S5Literal {
    /// The set of propositional literals occurring in this S5-literal.
    pub fn lits(&self) -> BTreeSet<PropLiteral> {
        match self {
            S5Literal::Prop(l) => [l.clone()].into_iter().collect(),
            S5Literal::BoxLit { lits, .. } | S5Literal::DiamondLit { lits, .. } => lits.clone(),
        }
    }
}

impl fmt::Display for S5Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            S5Literal::Prop(l) => write!(f, "{l}"),
            S5Literal::BoxLit { lits, .. } => {
                f.write_str("box(")?;
                join_lits(f, lits, " | ")?;
                f.write_str(")")
            }
            S5Literal::DiamondLit { lits, .. } => {
                f.write_str("dia(")?;
                join_lits(f, lits, " & ")?;
                f.write_str(")")
            }
        }
    }
}

fn join_lits(f: &mut fmt::Formatter<'_>, lits: &BTreeSet<PropLiteral>, sep: &str) -> fmt::Result {
    for (k, l) in lits.iter().enumerate() {
        if k > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// A disjunction of S5-literals; ids are 1-based and dense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S5Clause {
    pub id: u32,
    pub disjuncts: Vec<S5Literal>,
}

impl S5Clause {
    pub fn lits(&self) -> BTreeSet<PropLiteral> {
        let mut acc = BTreeSet::new();
        for d in &self.disjuncts {
            acc.extend(d.lits());
        }
        acc
    }
}

/// An S5-NF formula: clauses plus the fixed enumerations of box and diamond
/// bodies. `box_bodies[i]` is the literal set of `b(i+1)`, same for
/// diamonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S5Nf {
    pub clauses: Vec<S5Clause>,
    pub box_bodies: Vec<BTreeSet<PropLiteral>>,
    pub diamond_bodies: Vec<BTreeSet<PropLiteral>>,
    pub atoms: BTreeSet<Atom>,
    trivially_false: bool,
}

impl S5Nf {
    /// Number of box literals (`m`).
    pub fn box_count(&self) -> usize {
        self.box_bodies.len()
    }

    /// Number of diamond literals (`n`).
    pub fn diamond_count(&self) -> usize {
        self.diamond_bodies.len()
    }

    /// Body of box literal `id` (1-based).
    pub fn box_lits(&self, id: u32) -> &BTreeSet<PropLiteral> {
        &self.box_bodies[(id - 1) as usize]
    }

    /// Body of diamond literal `id` (1-based).
    pub fn diamond_lits(&self, id: u32) -> &BTreeSet<PropLiteral> {
        &self.diamond_bodies[(id - 1) as usize]
    }

    /// True when degenerate pruning emptied some clause; such a form is
    /// unsatisfiable by construction.
    pub fn is_trivially_false(&self) -> bool {
        self.trivially_false
    }

    /// All propositional literals occurring anywhere in the form.
    pub fn lits(&self) -> BTreeSet<PropLiteral> {
        let mut acc = BTreeSet::new();
        for c in &self.clauses {
            acc.extend(c.lits());
        }
        acc
    }

    /// Renders the form back into a plain formula. The grammar has no
    /// boolean constants, so the trivially false form becomes `p & ~p` and
    /// an empty clause list (everything pruned as tautological) becomes
    /// `p | ~p`, over some atom of the universe or a placeholder.
    pub fn to_formula(&self) -> Formula {
        let placeholder = || {
            self.atoms
                .iter()
                .next()
                .cloned()
                .unwrap_or_else(|| Atom::source("any"))
        };
        if self.trivially_false {
            let a = Formula::Atom(placeholder());
            return Formula::and(alloc::vec![a.clone(), Formula::not(a)]);
        }
        if self.clauses.is_empty() {
            let a = Formula::Atom(placeholder());
            return Formula::or(alloc::vec![a.clone(), Formula::not(a)]);
        }
        let clauses: Vec<Formula> = self
            .clauses
            .iter()
            .map(|c| {
                let parts: Vec<Formula> = c.disjuncts.iter().map(literal_to_formula).collect();
                Formula::or(parts)
            })
            .collect();
        Formula::and(clauses)
    }
}

fn literal_to_formula(lit: &S5Literal) -> Formula {
    match lit {
        S5Literal::Prop(l) => Formula::from_prop_literal(l),
        S5Literal::BoxLit { lits, .. } => {
            Formula::bx(Formula::or(lits.iter().map(Formula::from_prop_literal).collect()))
        }
        S5Literal::DiamondLit { lits, .. } => {
            Formula::dia(Formula::and(lits.iter().map(Formula::from_prop_literal).collect()))
        }
    }
}

impl fmt::Display for S5Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trivially_false {
            return f.write_str("<false>");
        }
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            let wrap = c.disjuncts.len() > 1;
            if wrap {
                f.write_str("(")?;
            }
            for (j, d) in c.disjuncts.iter().enumerate() {
                if j > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{d}")?;
            }
            if wrap {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

/// Disjunct description fed to [`S5NfBuilder::clause`].
#[derive(Clone, Debug)]
pub enum LitSpec {
    Prop(PropLiteral),
    Box(Vec<PropLiteral>),
    Diamond(Vec<PropLiteral>),
}

fn has_complementary_pair(lits: &BTreeSet<PropLiteral>) -> bool {
    lits.iter().any(|l| lits.contains(&l.complement()))
}

/// Assembles an [`S5Nf`] from clause descriptions, taking care of
/// deduplication, degenerate pruning and the first-occurrence enumeration of
/// modal bodies.
pub struct S5NfBuilder {
    clauses: Vec<Vec<S5Literal>>,
    boxes: Vec<BTreeSet<PropLiteral>>,
    box_index: BTreeMap<BTreeSet<PropLiteral>, u32>,
    diamonds: Vec<BTreeSet<PropLiteral>>,
    diamond_index: BTreeMap<BTreeSet<PropLiteral>, u32>,
    trivially_false: bool,
}

impl Default for S5NfBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl S5NfBuilder {
    pub fn new() -> S5NfBuilder {
        S5NfBuilder {
            clauses: Vec::new(),
            boxes: Vec::new(),
            box_index: BTreeMap::new(),
            diamonds: Vec::new(),
            diamond_index: BTreeMap::new(),
            trivially_false: false,
        }
    }

    fn intern_box(&mut self, lits: BTreeSet<PropLiteral>) -> u32 {
        if let Some(&id) = self.box_index.get(&lits) {
            return id;
        }
        let id = self.boxes.len() as u32 + 1;
        self.boxes.push(lits.clone());
        self.box_index.insert(lits, id);
        id
    }

    fn intern_diamond(&mut self, lits: BTreeSet<PropLiteral>) -> u32 {
        if let Some(&id) = self.diamond_index.get(&lits) {
            return id;
        }
        let id = self.diamonds.len() as u32 + 1;
        self.diamonds.push(lits.clone());
        self.diamond_index.insert(lits, id);
        id
    }

    /// Adds one clause. Modal ids are only handed out once the clause is
    /// known to survive pruning, so the index lists never hold bodies no
    /// clause references.
    pub fn clause(&mut self, disjuncts: Vec<LitSpec>) -> &mut Self {
        if self.trivially_false {
            return self;
        }
        enum Pending {
            Prop(PropLiteral),
            Boxed(BTreeSet<PropLiteral>),
            Dia(BTreeSet<PropLiteral>),
        }
        let mut pending: Vec<Pending> = Vec::new();
        let mut prop_seen: BTreeSet<PropLiteral> = BTreeSet::new();
        let mut boxes_seen: BTreeSet<BTreeSet<PropLiteral>> = BTreeSet::new();
        let mut diamonds_seen: BTreeSet<BTreeSet<PropLiteral>> = BTreeSet::new();
        for spec in disjuncts {
            match spec {
                LitSpec::Prop(l) => {
                    if prop_seen.contains(&l.complement()) {
                        return self; // tautological clause
                    }
                    if prop_seen.insert(l.clone()) {
                        pending.push(Pending::Prop(l));
                    }
                }
                LitSpec::Box(body) => {
                    let lits: BTreeSet<PropLiteral> = body.into_iter().collect();
                    assert!(!lits.is_empty(), "empty box body");
                    if has_complementary_pair(&lits) {
                        return self; // box over a tautology satisfies the clause
                    }
                    if boxes_seen.insert(lits.clone()) {
                        pending.push(Pending::Boxed(lits));
                    }
                }
                LitSpec::Diamond(body) => {
                    let lits: BTreeSet<PropLiteral> = body.into_iter().collect();
                    assert!(!lits.is_empty(), "empty diamond body");
                    if has_complementary_pair(&lits) {
                        continue; // dia over a contradiction is dropped
                    }
                    if diamonds_seen.insert(lits.clone()) {
                        pending.push(Pending::Dia(lits));
                    }
                }
            }
        }
        if pending.is_empty() {
            self.trivially_false = true;
            return self;
        }
        let out: Vec<S5Literal> = pending
            .into_iter()
            .map(|p| match p {
                Pending::Prop(l) => S5Literal::Prop(l),
                Pending::Boxed(lits) => {
                    let id = self.intern_box(lits.clone());
                    S5Literal::BoxLit { id, lits }
                }
                Pending::Dia(lits) => {
                    let id = self.intern_diamond(lits.clone());
                    S5Literal::DiamondLit { id, lits }
                }
            })
            .collect();
        self.clauses.push(out);
        self
    }

    pub fn build(self) -> S5Nf {
        let mut atoms: BTreeSet<Atom> = BTreeSet::new();
        let clauses: Vec<S5Clause> = self
            .clauses
            .into_iter()
            .enumerate()
            .map(|(k, disjuncts)| S5Clause { id: k as u32 + 1, disjuncts })
            .collect();
        for c in &clauses {
            for l in c.lits() {
                atoms.insert(l.atom);
            }
        }
        S5Nf {
            clauses,
            box_bodies: self.boxes,
            diamond_bodies: self.diamonds,
            atoms,
            trivially_false: self.trivially_false,
        }
    }
}

/// Convenience for tests and generators: a positive literal.
pub fn plit(name: &str) -> PropLiteral {
    PropLiteral::pos(Atom::source(name))
}

/// Convenience for tests and generators: a negative literal.
pub fn nlit(name: &str) -> PropLiteral {
    PropLiteral::neg(Atom::source(name))
}

/// Human-readable identifier of a box literal, as used in DIMACS comments
/// and ASP facts.
pub fn box_name(id: u32) -> String {
    let mut s = String::from("b");
    s.push_str(itoa(id).as_str());
    s
}

/// Human-readable identifier of a diamond literal.
pub fn diamond_name(id: u32) -> String {
    let mut s = String::from("d");
    s.push_str(itoa(id).as_str());
    s
}

fn itoa(v: u32) -> String {
    use alloc::string::ToString;
    v.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::is_s5nf;

    #[test]
    fn lits_of_modal_literals() {
        let b = S5Literal::BoxLit {
            id: 1,
            lits: [plit("p"), plit("q")].into_iter().collect(),
        };
        assert_eq!(b.lits(), [plit("p"), plit("q")].into_iter().collect());
        let d = S5Literal::DiamondLit {
            id: 2,
            lits: [nlit("p"), nlit("q")].into_iter().collect(),
        };
        assert_eq!(d.lits(), [nlit("p"), nlit("q")].into_iter().collect());
        let p = S5Literal::Prop(nlit("p"));
        assert_eq!(p.lits(), [nlit("p")].into_iter().collect());
    }

    #[test]
    fn lits_union_over_clauses() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Prop(plit("p")), LitSpec::Prop(nlit("q"))]);
        b.clause(alloc::vec![LitSpec::Prop(plit("r"))]);
        let nf = b.build();
        let mut expected = nf.clauses[0].lits();
        expected.extend(nf.clauses[1].lits());
        assert_eq!(nf.lits(), expected);
    }

    #[test]
    fn duplicate_modal_bodies_share_one_id() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("q"), plit("p")])]);
        let nf = b.build();
        assert_eq!(nf.box_count(), 1);
    }

    #[test]
    fn degenerate_box_drops_clause() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), nlit("p")])]);
        b.clause(alloc::vec![LitSpec::Prop(plit("q"))]);
        let nf = b.build();
        assert!(!nf.is_trivially_false());
        assert_eq!(nf.clauses.len(), 1);
        assert_eq!(nf.box_count(), 0);
    }

    #[test]
    fn degenerate_diamond_may_empty_a_clause() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Diamond(alloc::vec![plit("p"), nlit("p")])]);
        let nf = b.build();
        assert!(nf.is_trivially_false());
    }

    #[test]
    fn rendered_form_is_s5nf() {
        let mut b = S5NfBuilder::new();
        b.clause(alloc::vec![LitSpec::Prop(plit("p"))]);
        b.clause(alloc::vec![LitSpec::Box(alloc::vec![plit("p"), plit("q")])]);
        b.clause(alloc::vec![
            LitSpec::Diamond(alloc::vec![plit("p"), plit("q")]),
            LitSpec::Diamond(alloc::vec![nlit("p"), nlit("q")]),
        ]);
        let nf = b.build();
        assert!(is_s5nf(&nf.to_formula()));
    }
}

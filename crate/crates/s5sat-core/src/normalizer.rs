//! Rewrites an arbitrary formula into an equi-satisfiable S5 normal form.
//!
//! The passes run in a fixed order: desugar, negation normal form, modal
//! pushing (operator chains collapse to the innermost operator, `box`
//! distributes over `&`, `dia` over `|`, modal literals are lifted out of
//! box-disjunctions and diamond-conjunctions), then structure naming, which
//! replaces a conjunction nested under a disjunction (and dually) by a fresh
//! atom with one-sided defining box-clauses. Naming can re-enable the
//! lifting rules, so pushing and naming alternate until the result is in
//! normal form.
//!
//! A syntactically identical nested subformula is named once per run and
//! shares its fresh atom and defining clauses.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::formula::{is_s5nf, Atom, Formula, PropLiteral};
use crate::s5nf::{LitSpec, S5Nf, S5NfBuilder};

/// Supplies fresh atoms; one instance per normalisation problem.
#[derive(Debug, Default)]
pub struct FreshGen {
    counter: u32,
}

impl FreshGen {
    pub fn new() -> FreshGen {
        FreshGen { counter: 0 }
    }

    /// Starts the counter above any aux atom already present, so re-running
    /// the pipeline over its own output cannot collide.
    pub fn above(f: &Formula) -> FreshGen {
        let mut counter = 0;
        for atom in f.atoms() {
            if let crate::formula::AtomOrigin::Fresh(k) = atom.origin {
                counter = counter.max(k);
            } else if let Some(rest) = atom.name.strip_prefix(crate::formula::FRESH_PREFIX) {
                if let Ok(k) = rest.parse::<u32>() {
                    counter = counter.max(k);
                }
            }
        }
        FreshGen { counter }
    }

    pub fn next_atom(&mut self) -> Atom {
        self.counter += 1;
        Atom::fresh(self.counter)
    }
}

/// Pushes negations down to atoms; `~box` becomes `dia~` and `~dia` becomes
/// `box~`. Expects `->`/`<->` to be gone and removes them itself if not.
pub fn to_nnf(f: Formula) -> Formula {
    match f {
        Formula::Atom(_) => f,
        Formula::And(fs) => Formula::and(fs.into_iter().map(to_nnf).collect()),
        Formula::Or(fs) => Formula::or(fs.into_iter().map(to_nnf).collect()),
        Formula::Box(g) => Formula::bx(to_nnf(*g)),
        Formula::Diamond(g) => Formula::dia(to_nnf(*g)),
        Formula::Implies(..) | Formula::Iff(..) => to_nnf(f.desugar()),
        Formula::Not(g) => match *g {
            Formula::Atom(_) => Formula::not(*g),
            Formula::Not(h) => to_nnf(*h),
            Formula::And(fs) => {
                Formula::or(fs.into_iter().map(|h| to_nnf(Formula::not(h))).collect())
            }
            Formula::Or(fs) => {
                Formula::and(fs.into_iter().map(|h| to_nnf(Formula::not(h))).collect())
            }
            Formula::Box(h) => Formula::dia(to_nnf(Formula::not(*h))),
            Formula::Diamond(h) => Formula::bx(to_nnf(Formula::not(*h))),
            other @ (Formula::Implies(..) | Formula::Iff(..)) => {
                to_nnf(Formula::not(other.desugar()))
            }
        },
    }
}

fn is_modal_rooted(f: &Formula) -> bool {
    matches!(f, Formula::Box(_) | Formula::Diamond(_))
}

/// Applies the modal rewriting rules to fixpoint on an NNF input: chains of
/// modal operators keep only the innermost one, `box` distributes over
/// conjunctions and `dia` over disjunctions, and modal disjuncts (resp.
/// conjuncts) are lifted out of `box` (resp. `dia`) bodies. When every
/// top-level part of a body is modal, the outer operator is dropped
/// entirely; modal truth does not depend on the current world.
pub fn push_modalities(f: Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Not(_) => f,
        Formula::And(fs) => Formula::and(fs.into_iter().map(push_modalities).collect()),
        Formula::Or(fs) => Formula::or(fs.into_iter().map(push_modalities).collect()),
        Formula::Implies(..) | Formula::Iff(..) => push_modalities(f.desugar()),
        Formula::Box(body) => {
            let body = push_modalities(*body);
            match body {
                Formula::Box(_) | Formula::Diamond(_) => body,
                Formula::And(parts) => Formula::and(
                    parts.into_iter().map(|p| push_modalities(Formula::bx(p))).collect(),
                ),
                Formula::Or(parts) => {
                    let (modal, plain): (Vec<_>, Vec<_>) =
                        parts.into_iter().partition(is_modal_rooted);
                    if modal.is_empty() {
                        Formula::bx(Formula::or(plain))
                    } else if plain.is_empty() {
                        Formula::or(modal)
                    } else {
                        let mut out = alloc::vec![Formula::bx(Formula::or(plain))];
                        out.extend(modal);
                        Formula::or(out)
                    }
                }
                other => Formula::bx(other),
            }
        }
        Formula::Diamond(body) => {
            let body = push_modalities(*body);
            match body {
                Formula::Box(_) | Formula::Diamond(_) => body,
                Formula::Or(parts) => Formula::or(
                    parts.into_iter().map(|p| push_modalities(Formula::dia(p))).collect(),
                ),
                Formula::And(parts) => {
                    let (modal, plain): (Vec<_>, Vec<_>) =
                        parts.into_iter().partition(is_modal_rooted);
                    if modal.is_empty() {
                        Formula::dia(Formula::and(plain))
                    } else if plain.is_empty() {
                        Formula::and(modal)
                    } else {
                        let mut out = alloc::vec![Formula::dia(Formula::and(plain))];
                        out.extend(modal);
                        Formula::and(out)
                    }
                }
                other => Formula::dia(other),
            }
        }
    }
}

struct Namer<'a> {
    gen: &'a mut FreshGen,
    memo: BTreeMap<Formula, Atom>,
    defs: Vec<Formula>,
}

impl<'a> Namer<'a> {
    fn name_for(&mut self, sub: &Formula) -> Option<Atom> {
        self.memo.get(sub).cloned()
    }

    /// Names a conjunction that blocks a disjunction: fresh `p` plus one
    /// defining clause `box(~p | conjunct)` per conjunct.
    fn name_conjunction(&mut self, sub: Formula) -> Atom {
        if let Some(a) = self.name_for(&sub) {
            return a;
        }
        let atom = self.gen.next_atom();
        let not_p = Formula::not(Formula::Atom(atom.clone()));
        if let Formula::And(parts) = &sub {
            for part in parts {
                self.defs
                    .push(Formula::bx(Formula::or(alloc::vec![not_p.clone(), part.clone()])));
            }
        } else {
            unreachable!("name_conjunction expects a conjunction");
        }
        self.memo.insert(sub, atom.clone());
        atom
    }

    /// Names a disjunction that blocks a conjunction under `dia`: fresh `p`
    /// plus a single defining clause `box(~p | d1 | ... | dk)`.
    fn name_disjunction(&mut self, sub: Formula) -> Atom {
        if let Some(a) = self.name_for(&sub) {
            return a;
        }
        let atom = self.gen.next_atom();
        let not_p = Formula::not(Formula::Atom(atom.clone()));
        if let Formula::Or(parts) = &sub {
            let mut clause = alloc::vec![not_p];
            clause.extend(parts.iter().cloned());
            self.defs.push(Formula::bx(Formula::or(clause)));
        } else {
            unreachable!("name_disjunction expects a disjunction");
        }
        self.memo.insert(sub, atom.clone());
        atom
    }

    /// One bottom-up pass. Conjunctive disjuncts are replaced everywhere
    /// they block a disjunction; disjunctive conjuncts are replaced inside
    /// diamond bodies.
    fn pass(&mut self, f: Formula) -> Formula {
        match f {
            Formula::Atom(_) | Formula::Not(_) => f,
            Formula::And(parts) => {
                Formula::and(parts.into_iter().map(|p| self.pass(p)).collect())
            }
            Formula::Or(parts) => {
                let parts: Vec<Formula> = parts.into_iter().map(|p| self.pass(p)).collect();
                let parts = parts
                    .into_iter()
                    .map(|p| {
                        if matches!(p, Formula::And(_)) {
                            Formula::Atom(self.name_conjunction(p))
                        } else {
                            p
                        }
                    })
                    .collect();
                Formula::or(parts)
            }
            Formula::Box(body) => Formula::bx(self.pass(*body)),
            Formula::Diamond(body) => {
                let body = self.pass(*body);
                match body {
                    Formula::And(parts) => {
                        let parts = parts
                            .into_iter()
                            .map(|p| {
                                if matches!(p, Formula::Or(_)) {
                                    Formula::Atom(self.name_disjunction(p))
                                } else {
                                    p
                                }
                            })
                            .collect();
                        Formula::dia(Formula::and(parts))
                    }
                    other => Formula::dia(other),
                }
            }
            Formula::Implies(..) | Formula::Iff(..) => {
                let d = f.desugar();
                self.pass(d)
            }
        }
    }
}

/// One naming step over a pushed NNF formula. Returns the rewritten formula
/// with the defining clauses conjoined at the top level.
pub fn name_nested(f: Formula, gen: &mut FreshGen) -> Formula {
    let mut namer = Namer { gen, memo: BTreeMap::new(), defs: Vec::new() };
    let rewritten = namer.pass(f);
    if namer.defs.is_empty() {
        rewritten
    } else {
        let mut parts = alloc::vec![rewritten];
        parts.append(&mut namer.defs);
        Formula::and(parts)
    }
}

/// Full pipeline from an arbitrary formula to [`S5Nf`]. Satisfiability is
/// preserved; a formula whose clauses all collapse under degenerate pruning
/// comes back as a trivially false form.
pub fn normalize(f: Formula) -> S5Nf {
    let mut gen = FreshGen::above(&f);
    let mut cur = push_modalities(to_nnf(f.desugar()));
    let mut rounds = 0usize;
    while !is_s5nf(&cur) {
        cur = push_modalities(name_nested(cur, &mut gen));
        rounds += 1;
        assert!(rounds < 10_000, "normalisation did not converge");
    }
    collect(cur)
}

fn prop_of(f: &Formula) -> PropLiteral {
    f.as_prop_literal().expect("S5-NF guarantees a literal here")
}

fn literal_spec(f: &Formula) -> LitSpec {
    match f {
        Formula::Box(body) => {
            let lits = match body.as_ref() {
                Formula::Or(parts) => parts.iter().map(prop_of).collect(),
                single => alloc::vec![prop_of(single)],
            };
            LitSpec::Box(lits)
        }
        Formula::Diamond(body) => {
            let lits = match body.as_ref() {
                Formula::And(parts) => parts.iter().map(prop_of).collect(),
                single => alloc::vec![prop_of(single)],
            };
            LitSpec::Diamond(lits)
        }
        other => LitSpec::Prop(prop_of(other)),
    }
}

/// Builds the S5NF value from a formula that [`is_s5nf`] accepts.
fn collect(f: Formula) -> S5Nf {
    let clauses: Vec<&Formula> = match &f {
        Formula::And(parts) => parts.iter().collect(),
        other => alloc::vec![other],
    };
    let mut builder = S5NfBuilder::new();
    for clause in clauses {
        let disjuncts: Vec<&Formula> = match clause {
            Formula::Or(parts) => parts.iter().collect(),
            other => alloc::vec![other],
        };
        builder.clause(disjuncts.into_iter().map(literal_spec).collect());
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::parser::{parse, SourceFormat};

    fn native(s: &str) -> Formula {
        parse(s, SourceFormat::Native).unwrap()
    }

    #[test]
    fn nnf_rules() {
        assert_eq!(to_nnf(native("~~p")), F::atom("p"));
        assert_eq!(
            to_nnf(native("~(p & dia(q))")),
            native("~p | box(~q)")
        );
        assert_eq!(to_nnf(native("~box(p | q)")), native("dia(~p & ~q)"));
    }

    #[test]
    fn push_rules() {
        assert_eq!(push_modalities(native("box(dia(p))")), native("dia(p)"));
        assert_eq!(
            push_modalities(native("box(p & q)")),
            native("box(p) & box(q)")
        );
        assert_eq!(
            push_modalities(native("box(p | dia(q))")),
            native("box(p) | dia(q)")
        );
        // all disjuncts modal: the outer box disappears
        assert_eq!(
            push_modalities(native("box(dia(p) | dia(q))")),
            native("dia(p) | dia(q)")
        );
    }

    #[test]
    fn naming_shape() {
        let mut gen = FreshGen::new();
        let named = name_nested(native("(a & b) | c"), &mut gen);
        assert_eq!(
            named,
            native("(aux1_ | c) & box(~aux1_ | a) & box(~aux1_ | b)")
                .replace_aux()
        );
        // already normal: untouched
        let mut gen2 = FreshGen::new();
        assert_eq!(name_nested(native("a & (b | c)"), &mut gen2), native("a & (b | c)"));
    }

    // The native parser rejects the reserved prefix, so expected trees that
    // mention fresh atoms are written with a placeholder and fixed up here.
    trait ReplaceAux {
        fn replace_aux(self) -> Formula;
    }

    impl ReplaceAux for Formula {
        fn replace_aux(self) -> Formula {
            match self {
                F::Atom(a) if a.name.starts_with("aux") && a.name.ends_with('_') => {
                    let digits: u32 = a.name[3..a.name.len() - 1].parse().unwrap();
                    F::Atom(crate::formula::Atom::fresh(digits))
                }
                F::Atom(_) => self,
                F::Not(g) => F::not(g.replace_aux()),
                F::And(gs) => F::and(gs.into_iter().map(|g| g.replace_aux()).collect()),
                F::Or(gs) => F::or(gs.into_iter().map(|g| g.replace_aux()).collect()),
                F::Implies(a, b) => F::implies(a.replace_aux(), b.replace_aux()),
                F::Iff(a, b) => F::iff(a.replace_aux(), b.replace_aux()),
                F::Box(g) => F::bx(g.replace_aux()),
                F::Diamond(g) => F::dia(g.replace_aux()),
            }
        }
    }

    #[test]
    fn normalize_example_counts() {
        let nf = normalize(native("p & box(p | q) & (dia(p & q) | dia(~p & ~q))"));
        assert_eq!(nf.box_count(), 1);
        assert_eq!(nf.diamond_count(), 2);
        assert_eq!(nf.clauses.len(), 3);
        assert!(!nf.is_trivially_false());
    }

    #[test]
    fn normalize_unit() {
        let nf = normalize(native("p"));
        assert_eq!(nf.box_count(), 0);
        assert_eq!(nf.diamond_count(), 0);
        assert_eq!(nf.clauses.len(), 1);
    }

    #[test]
    fn normalize_output_is_s5nf() {
        for src in [
            "~(box(p) & dia(q))",
            "dia((a | b) & c)",
            "~(p & dia(q)) -> box(r)",
            "box(p | (q & r))",
            "dia(p & (q | r))",
            "~dia(box(~a) & box(~b))",
        ] {
            let nf = normalize(native(src));
            assert!(
                nf.is_trivially_false() || crate::formula::is_s5nf(&nf.to_formula()),
                "not in normal form for {src}: {nf}"
            );
        }
    }

    #[test]
    fn no_nested_modalities_in_output() {
        let nf = normalize(native("box(box(dia(p | q)) & dia(q & (r | s)))"));
        for body in nf.box_bodies.iter().chain(nf.diamond_bodies.iter()) {
            assert!(!body.is_empty());
        }
        assert!(crate::formula::is_s5nf(&nf.to_formula()));
    }

    #[test]
    fn fresh_atoms_used_in_defining_and_host_clauses() {
        let nf = normalize(native("(a & b) | c"));
        for atom in nf.atoms.iter().filter(|a| a.is_fresh()) {
            let hosts = nf
                .clauses
                .iter()
                .filter(|c| c.lits().iter().any(|l| &l.atom == atom))
                .count();
            assert!(hosts >= 2, "fresh atom {atom} appears in {hosts} clause(s)");
        }
    }
}

//! Answer-set-programming text output: the relational encoding of an S5-NF
//! formula as ground facts, and the companion rule programs, one per
//! encoding variant. Output is plain text for an external grounder; no ASP
//! system is embedded or invoked.
//!
//! Two printing notes. The source rules for literal reachability mix `p`/`n`
//! and `pos`/`neg` polarity constants; the emitted rules use `pos`/`neg`
//! throughout, otherwise they would never join. And the second argument of
//! `lrl` in the choice rules is matched with a wildcard polarity while the
//! `reach_box` rules match polarity through `lrb`; that asymmetry is
//! reproduced as is.

use alloc::string::String;
use alloc::vec::Vec;

use crate::encoder::compute_worlds;
use crate::formula::complement_set;
use crate::s5nf::{box_name, diamond_name, S5Literal, S5Nf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AspVariant {
    Full,
    Reach,
    ReachConflicts,
    ReachBoxes,
    ReachDiamonds,
    ReachAll,
}

impl AspVariant {
    pub fn name(&self) -> &'static str {
        match self {
            AspVariant::Full => "full",
            AspVariant::Reach => "reach",
            AspVariant::ReachConflicts => "reach_conflicts",
            AspVariant::ReachBoxes => "reach_boxes",
            AspVariant::ReachDiamonds => "reach_diamonds",
            AspVariant::ReachAll => "reach_all",
        }
    }

    fn merges_worlds(&self) -> bool {
        matches!(self, AspVariant::ReachDiamonds | AspVariant::ReachAll)
    }
}

/// Atom names go out verbatim when they are valid ASP constants, quoted
/// otherwise.
fn asp_term(name: &str) -> String {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        }
        _ => false,
    };
    if ok {
        String::from(name)
    } else {
        alloc::format!("\"{name}\"")
    }
}

fn push_fact(out: &mut String, fact: String) {
    out.push_str(&fact);
    out.push_str(".\n");
}

/// Ground facts of the relational encoding, plus the enrichment facts the
/// variant needs. Blocks come out as atoms, boxes, diamonds, clauses and
/// then enrichment facts, each block ordered by identifier.
pub fn emit_facts(nf: &S5Nf, variant: AspVariant) -> String {
    let mut out = String::new();
    for atom in &nf.atoms {
        push_fact(&mut out, alloc::format!("atom({})", asp_term(&atom.name)));
    }
    for i in 1..=nf.box_count() as u32 {
        let id = box_name(i);
        push_fact(&mut out, alloc::format!("box({id})"));
        for lit in nf.box_lits(i).iter().filter(|l| l.positive) {
            push_fact(&mut out, alloc::format!("pos_box({id},{})", asp_term(&lit.atom.name)));
        }
        for lit in nf.box_lits(i).iter().filter(|l| !l.positive) {
            push_fact(&mut out, alloc::format!("neg_box({id},{})", asp_term(&lit.atom.name)));
        }
    }
    for j in 1..=nf.diamond_count() as u32 {
        let id = diamond_name(j);
        push_fact(&mut out, alloc::format!("diamond({id})"));
        for lit in nf.diamond_lits(j).iter().filter(|l| l.positive) {
            push_fact(
                &mut out,
                alloc::format!("pos_diamond({id},{})", asp_term(&lit.atom.name)),
            );
        }
        for lit in nf.diamond_lits(j).iter().filter(|l| !l.positive) {
            push_fact(
                &mut out,
                alloc::format!("neg_diamond({id},{})", asp_term(&lit.atom.name)),
            );
        }
    }
    for clause in &nf.clauses {
        let cid = alloc::format!("c{}", clause.id);
        push_fact(&mut out, alloc::format!("clause({cid})"));
        let mut pos: Vec<String> = Vec::new();
        let mut neg: Vec<String> = Vec::new();
        for d in &clause.disjuncts {
            match d {
                S5Literal::Prop(l) => {
                    let name = asp_term(&l.atom.name);
                    if l.positive {
                        pos.push(name);
                    } else {
                        neg.push(name);
                    }
                }
                S5Literal::BoxLit { id, .. } => pos.push(box_name(*id)),
                S5Literal::DiamondLit { id, .. } => pos.push(diamond_name(*id)),
            }
        }
        pos.sort();
        neg.sort();
        for p in pos {
            push_fact(&mut out, alloc::format!("pos_clause({cid},{p})"));
        }
        for n in neg {
            push_fact(&mut out, alloc::format!("neg_clause({cid},{n})"));
        }
    }

    let conflicts = matches!(variant, AspVariant::ReachConflicts | AspVariant::ReachAll);
    let boxes = matches!(variant, AspVariant::ReachBoxes | AspVariant::ReachAll);
    if conflicts {
        for i in 1..=nf.box_count() as u32 {
            let comp = complement_set(nf.box_lits(i));
            for j in 1..=nf.diamond_count() as u32 {
                if comp.is_subset(nf.diamond_lits(j)) {
                    push_fact(
                        &mut out,
                        alloc::format!("box_diamond_conflict({},{})", box_name(i), diamond_name(j)),
                    );
                }
            }
        }
    }
    if boxes {
        let m = nf.box_count() as u32;
        for i in 1..=m {
            for j in 1..=m {
                if i != j && nf.box_lits(i).is_subset(nf.box_lits(j)) {
                    push_fact(
                        &mut out,
                        alloc::format!("box_subset({},{})", box_name(i), box_name(j)),
                    );
                }
            }
        }
    }
    if variant.merges_worlds() {
        let n = nf.diamond_count() as u32;
        for i in 1..=n {
            for j in 1..=n {
                if i != j && nf.diamond_lits(i).is_subset(nf.diamond_lits(j)) {
                    push_fact(
                        &mut out,
                        alloc::format!("diamond_subset({},{})", diamond_name(i), diamond_name(j)),
                    );
                }
            }
        }
        for group in compute_worlds(nf).groups {
            for member in group.members {
                push_fact(
                    &mut out,
                    alloc::format!(
                        "world({},{})",
                        diamond_name(group.representative),
                        diamond_name(member)
                    ),
                );
            }
        }
    }
    out
}

const RULES: &[(u32, &str)] = &[
    (0, "world(D,D) :- diamond(D)."),
    (1, "{true(X)} :- box(X)."),
    (2, "{true(X)} :- diamond(X)."),
    (3, "{true(X)} :- atom(X)."),
    (4, "{true(X,W)} :- world(W,_), atom(X)."),
    (5, ":- clause(C); not true(X) : pos_clause(C,X); true(X) : neg_clause(C,X)."),
    (6, ":- box(B), true(B); not true(X) : pos_box(B,X); true(X) : neg_box(B,X)."),
    (
        7,
        ":- world(W,D); box(B), true(B), diamond(D), true(D), not implied(D); \
         not true(X,W) : pos_box(B,X); true(X,W) : neg_box(B,X).",
    ),
    (
        8,
        "implied(D) :- diamond(D); true(X) : pos_diamond(D,X); \
         not true(X) : neg_diamond(D,X).",
    ),
    (9, ":- diamond(D), implied(D), not true(D)."),
    (10, ":- pos_diamond(D,X); true(D), not implied(D); world(W,D), not true(X,W)."),
    (11, ":- neg_diamond(D,X); true(D), not implied(D); world(W,D), true(X,W)."),
    (12, "need(W) :- world(W,D), true(D), not implied(D)."),
    (13, ":- atom(X), world(W,_), not need(W), true(X,W)."),
    (14, "{true(Y,W)} :- world(W,D), pos_diamond(D,X), lrl(X,pos,Y,_)."),
    (15, "{true(Y,W)} :- world(W,D), neg_diamond(D,X), lrl(X,neg,Y,_)."),
    (16, "lrl(X,pos,X,pos) :- atom(X), pos_diamond(_,X)."),
    (17, "lrl(X,neg,X,neg) :- atom(X), neg_diamond(_,X)."),
    (18, "lrl(X,PX,Z,pos) :- lrl(X,PX,Y,neg); pos_box(B,Y); pos_box(B,Z), Z!=Y."),
    (19, "lrl(X,PX,Z,neg) :- lrl(X,PX,Y,neg); pos_box(B,Y); neg_box(B,Z)."),
    (20, "lrl(X,PX,Z,pos) :- lrl(X,PX,Y,pos); neg_box(B,Y); pos_box(B,Z)."),
    (21, "lrl(X,PX,Z,neg) :- lrl(X,PX,Y,pos); neg_box(B,Y); neg_box(B,Z), Z!=Y."),
    (22, "lrb(X,P,B) :- lrl(X,P,Y,neg); pos_box(B,Y)."),
    (23, "lrb(X,P,B) :- lrl(X,P,Y,pos); neg_box(B,Y)."),
    (24, "reach_box(W,B) :- world(W,D), pos_diamond(D,X); lrb(X,pos,B)."),
    (25, "reach_box(W,B) :- world(W,D), neg_diamond(D,X); lrb(X,neg,B)."),
    (
        26,
        ":- world(W,D), diamond(D), true(D), not implied(D); reach_box(W,B); \
         true(B); not true(X,W) : pos_box(B,X); true(X,W) : neg_box(B,X).",
    ),
    (27, ":- box_diamond_conflict(B,D); true(B), true(D)."),
    (28, ":- box_subset(B,B'), true(B), not true(B')."),
    (29, "implied(D) :- diamond_subset(D,D'), true(D')."),
];

fn rule_numbers(variant: AspVariant) -> Vec<u32> {
    let full: Vec<u32> = (0..=13).collect();
    let reach: Vec<u32> = (0..=13)
        .filter(|r| *r != 4 && *r != 7)
        .chain(14..=26)
        .collect();
    match variant {
        AspVariant::Full => full,
        AspVariant::Reach => reach,
        AspVariant::ReachConflicts => reach.into_iter().chain([27]).collect(),
        AspVariant::ReachBoxes => reach.into_iter().chain([28]).collect(),
        AspVariant::ReachDiamonds => reach
            .into_iter()
            .filter(|r| *r != 0)
            .chain([29])
            .collect(),
        AspVariant::ReachAll => reach
            .into_iter()
            .filter(|r| *r != 0)
            .chain([27, 28, 29])
            .collect(),
    }
}

/// The rule program of one variant, one rule per line, annotated with its
/// rule number.
pub fn emit_program(variant: AspVariant) -> String {
    let numbers = rule_numbers(variant);
    let mut out = alloc::format!("% {} program\n", variant.name());
    for n in numbers {
        let (_, text) = RULES.iter().find(|(k, _)| *k == n).expect("rule exists");
        out.push_str(&alloc::format!("{text} % r{n}\n"));
    }
    out
}

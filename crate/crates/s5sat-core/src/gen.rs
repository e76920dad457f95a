//! Seeded random generation of formulas and S5-NF instances, used by the
//! test suites and handy for benchmarking. Everything is deterministic in
//! the seed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::formula::{Formula, PropLiteral};
use crate::normalizer::to_nnf;
use crate::s5nf::{LitSpec, S5Nf, S5NfBuilder};

/// xorshift64* generator; small, fast and reproducible.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { state: seed.max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn chance(&mut self, numerator: usize, denominator: usize) -> bool {
        self.below(denominator) < numerator
    }
}

const ATOM_POOL: [&str; 15] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "k", "l", "m", "n", "r", "s", "t",
];

fn atom_names(count: usize) -> Vec<&'static str> {
    ATOM_POOL[..count.min(ATOM_POOL.len())].to_vec()
}

/// Parameters for arbitrary formula generation.
#[derive(Clone, Debug)]
pub struct FormulaGenConfig {
    pub atoms: usize,
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for FormulaGenConfig {
    fn default() -> Self {
        FormulaGenConfig { atoms: 4, max_depth: 4, max_nodes: 12 }
    }
}

/// One random formula. Node and depth budgets are respected; connectives
/// include the sugar forms so the desugaring path gets exercised too.
pub fn random_formula(rng: &mut Rng, cfg: &FormulaGenConfig) -> Formula {
    let names = atom_names(cfg.atoms);
    let mut budget = cfg.max_nodes.max(1);
    grow(rng, &names, cfg.max_depth, &mut budget)
}

fn grow(rng: &mut Rng, names: &[&str], depth: usize, budget: &mut usize) -> Formula {
    *budget = budget.saturating_sub(1);
    if depth == 0 || *budget == 0 {
        return Formula::atom(names[rng.below(names.len())]);
    }
    match rng.below(12) {
        0 => Formula::atom(names[rng.below(names.len())]),
        1 | 2 => Formula::not(grow(rng, names, depth - 1, budget)),
        3 | 4 => {
            let k = 2 + rng.below(2);
            Formula::and((0..k).map(|_| grow(rng, names, depth - 1, budget)).collect())
        }
        5 | 6 => {
            let k = 2 + rng.below(2);
            Formula::or((0..k).map(|_| grow(rng, names, depth - 1, budget)).collect())
        }
        7 | 8 => Formula::bx(grow(rng, names, depth - 1, budget)),
        9 | 10 => Formula::dia(grow(rng, names, depth - 1, budget)),
        _ => {
            if rng.chance(1, 2) {
                Formula::implies(
                    grow(rng, names, depth - 1, budget),
                    grow(rng, names, depth - 1, budget),
                )
            } else {
                Formula::iff(
                    grow(rng, names, depth - 1, budget),
                    grow(rng, names, depth - 1, budget),
                )
            }
        }
    }
}

/// Random formula kept small enough for the brute-force oracle: accepts a
/// candidate only when its negation normal form has at most `max_boxes`
/// boxes and `max_diamonds` diamonds.
pub fn random_guarded_formula(
    rng: &mut Rng,
    cfg: &FormulaGenConfig,
    max_boxes: usize,
    max_diamonds: usize,
) -> Formula {
    loop {
        let f = random_formula(rng, cfg);
        let nnf = to_nnf(f.clone().desugar());
        let diamonds = nnf.diamond_count();
        let boxes = nnf.modal_count() - diamonds;
        if diamonds <= max_diamonds && boxes <= max_boxes {
            return f;
        }
    }
}

/// Like [`random_guarded_formula`], and additionally the normal form of the
/// candidate must itself fit the oracle guard (at most 6 atoms including
/// the aux atoms the normaliser invents, and at most 6 modal literals), so
/// equi-satisfiability suites can run the oracle on both sides.
pub fn random_oracle_friendly_formula(
    rng: &mut Rng,
    cfg: &FormulaGenConfig,
    max_boxes: usize,
    max_diamonds: usize,
) -> Formula {
    use crate::oracle::{GUARD_MAX_ATOMS, GUARD_MAX_MODALS};
    loop {
        let f = random_guarded_formula(rng, cfg, max_boxes, max_diamonds);
        if f.atoms().len() > GUARD_MAX_ATOMS || f.modal_count() > GUARD_MAX_MODALS {
            continue;
        }
        let rendered = crate::normalizer::normalize(f.clone()).to_formula();
        if rendered.atoms().len() <= GUARD_MAX_ATOMS && rendered.modal_count() <= GUARD_MAX_MODALS
        {
            return f;
        }
    }
}

/// Parameters for direct S5-NF generation.
#[derive(Clone, Debug)]
pub struct NfGenConfig {
    pub atoms: usize,
    pub max_boxes: usize,
    pub max_diamonds: usize,
    pub max_clauses: usize,
    pub max_body: usize,
}

impl Default for NfGenConfig {
    fn default() -> Self {
        NfGenConfig { atoms: 5, max_boxes: 4, max_diamonds: 4, max_clauses: 6, max_body: 3 }
    }
}

fn random_literal(rng: &mut Rng, names: &[&str]) -> PropLiteral {
    let atom = crate::formula::Atom::source(names[rng.below(names.len())]);
    if rng.chance(1, 2) {
        PropLiteral::pos(atom)
    } else {
        PropLiteral::neg(atom)
    }
}

/// Body over distinct atoms with random signs, so no modal literal is
/// degenerate by construction.
fn random_body(rng: &mut Rng, names: &[&str], max_body: usize) -> Vec<PropLiteral> {
    let len = (1 + rng.below(max_body)).min(names.len());
    let mut picked: BTreeSet<usize> = BTreeSet::new();
    while picked.len() < len {
        picked.insert(rng.below(names.len()));
    }
    picked
        .into_iter()
        .map(|i| {
            let atom = crate::formula::Atom::source(names[i]);
            if rng.chance(1, 2) {
                PropLiteral::pos(atom)
            } else {
                PropLiteral::neg(atom)
            }
        })
        .collect()
}

/// One random S5-NF instance. Every generated box and diamond occurs in at
/// least one clause; extra propositional literals pad the clauses.
pub fn random_s5nf(rng: &mut Rng, cfg: &NfGenConfig) -> S5Nf {
    let names = atom_names(cfg.atoms);
    // skew towards modally dense instances; the occasional degenerate one
    // keeps the no-modality paths honest
    let count = |rng: &mut Rng, max: usize| {
        if max == 0 || rng.chance(1, 8) {
            0
        } else {
            1 + rng.below(max)
        }
    };
    let n_boxes = count(rng, cfg.max_boxes);
    let n_diamonds = count(rng, cfg.max_diamonds);
    // boxes lean short: a short disjunction constrains every world hard,
    // which is where the interesting conflicts come from
    let box_body = cfg.max_body.clamp(1, 2);
    let boxes: Vec<Vec<PropLiteral>> =
        (0..n_boxes).map(|_| random_body(rng, &names, box_body)).collect();
    let diamonds: Vec<Vec<PropLiteral>> =
        (0..n_diamonds).map(|_| random_body(rng, &names, cfg.max_body)).collect();

    // most modal literals land in unit clauses, so they are forced and can
    // actually clash; the rest join disjunctions
    let mut specs: Vec<Vec<LitSpec>> = Vec::new();
    let place = |rng: &mut Rng, specs: &mut Vec<Vec<LitSpec>>, lit: LitSpec| {
        if specs.is_empty() || rng.chance(3, 4) {
            specs.push(alloc::vec![lit]);
        } else {
            let at = rng.below(specs.len());
            specs[at].push(lit);
        }
    };
    for body in &boxes {
        place(rng, &mut specs, LitSpec::Box(body.clone()));
        if rng.chance(1, 6) {
            place(rng, &mut specs, LitSpec::Box(body.clone()));
        }
    }
    for body in &diamonds {
        place(rng, &mut specs, LitSpec::Diamond(body.clone()));
        if rng.chance(1, 6) {
            place(rng, &mut specs, LitSpec::Diamond(body.clone()));
        }
    }
    // a few purely propositional clauses, mostly binary so the modal
    // structure stays the main source of conflicts
    let extra_clauses = rng.below(cfg.max_clauses.clamp(1, 3) + 1);
    for _ in 0..extra_clauses {
        let len = if rng.chance(1, 4) { 1 } else { 2 };
        specs.push((0..len).map(|_| LitSpec::Prop(random_literal(rng, &names))).collect());
    }
    if specs.is_empty() {
        specs.push(alloc::vec![LitSpec::Prop(random_literal(rng, &names))]);
    }
    // occasionally pad a modal clause with a propositional escape hatch
    for spec in specs.iter_mut() {
        if rng.chance(1, 6) {
            spec.push(LitSpec::Prop(random_literal(rng, &names)));
        }
    }
    let mut builder = S5NfBuilder::new();
    for spec in specs {
        if !spec.is_empty() {
            builder.clause(spec);
        }
    }
    builder.build()
}

/// Fresh atom-free name pool sanity used by tests.
pub fn pool_size() -> usize {
    ATOM_POOL.len()
}

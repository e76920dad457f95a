//! Conflict-driven clause learning over two watched literals per clause.
//!
//! Branching picks the unassigned variable with the highest activity (ties
//! break towards the lower index, and initial activity follows allocation
//! order), with saved phases starting at false. Restarts follow a Luby
//! sequence with a base of 64 conflicts. All of it is deterministic, so a
//! given instance always produces the same model.

use alloc::vec::Vec;

use super::{Assignment, Budget, Outcome, SolverStats, TimedOut};

const RESTART_BASE: u64 = 64;
const ACTIVITY_DECAY: f64 = 0.95;
const ACTIVITY_LIMIT: f64 = 1e100;

/// Literal as an index into watch lists: variable is 0-based here.
#[inline]
fn code(l: i32) -> usize {
    let v = (l.unsigned_abs() - 1) as usize;
    v * 2 + usize::from(l < 0)
}

#[inline]
fn var(l: i32) -> usize {
    (l.unsigned_abs() - 1) as usize
}

#[inline]
fn value_of(assign: &[i8], l: i32) -> i8 {
    let a = assign[var(l)];
    if l > 0 {
        a
    } else {
        -a
    }
}

fn luby(mut x: u64) -> u64 {
    // find the finite subsequence containing index x and its position
    let (mut size, mut seq) = (1u64, 0u32);
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

struct Solver<'a> {
    clauses: Vec<Vec<i32>>,
    watches: Vec<Vec<u32>>,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<i32>,
    trail: Vec<i32>,
    lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    stats: SolverStats,
    budget: Option<Budget<'a>>,
}

enum AddResult {
    Ok,
    TopConflict,
}

impl<'a> Solver<'a> {
    fn new(nvars: usize, budget: Option<Budget<'a>>) -> Solver<'a> {
        Solver {
            clauses: Vec::new(),
            watches: alloc::vec![Vec::new(); nvars * 2],
            assign: alloc::vec![0; nvars],
            level: alloc::vec![0; nvars],
            reason: alloc::vec![-1; nvars],
            trail: Vec::new(),
            lim: Vec::new(),
            qhead: 0,
            // allocation order seeds the branching order
            activity: (0..nvars).map(|v| 1.0 - v as f64 * 1e-9).collect(),
            var_inc: 1.0,
            phase: alloc::vec![false; nvars],
            seen: alloc::vec![false; nvars],
            stats: SolverStats::default(),
            budget,
        }
    }

    #[inline]
    fn value(&self, l: i32) -> i8 {
        value_of(&self.assign, l)
    }

    fn decision_level(&self) -> u32 {
        self.lim.len() as u32
    }

    fn enqueue(&mut self, l: i32, reason: i32) {
        let v = var(l);
        debug_assert_eq!(self.assign[v], 0);
        self.assign[v] = if l > 0 { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
        self.stats.propagations += 1;
    }

    fn add_input_clause(&mut self, lits: &[i32]) -> AddResult {
        let mut c: Vec<i32> = Vec::with_capacity(lits.len());
        for &l in lits {
            if c.contains(&-l) {
                return AddResult::Ok; // tautology
            }
            if !c.contains(&l) {
                c.push(l);
            }
        }
        match c.len() {
            0 => AddResult::TopConflict,
            1 => match self.value(c[0]) {
                1 => AddResult::Ok,
                -1 => AddResult::TopConflict,
                _ => {
                    self.enqueue(c[0], -1);
                    AddResult::Ok
                }
            },
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[code(c[0])].push(idx);
                self.watches[code(c[1])].push(idx);
                self.clauses.push(c);
                AddResult::Ok
            }
        }
    }

    /// Attaches a learnt clause (already organised so that index 0 is the
    /// asserting literal and index 1 has the backjump level) and enqueues
    /// the asserting literal.
    fn add_learnt(&mut self, c: Vec<i32>) {
        debug_assert!(!c.is_empty());
        if c.len() == 1 {
            self.enqueue(c[0], -1);
            return;
        }
        let idx = self.clauses.len() as u32;
        self.watches[code(c[0])].push(idx);
        self.watches[code(c[1])].push(idx);
        let assert_lit = c[0];
        self.clauses.push(c);
        self.enqueue(assert_lit, idx as i32);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let l = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = -l;
            let mut list = core::mem::take(&mut self.watches[code(false_lit)]);
            let mut keep = 0usize;
            let mut conflict: Option<u32> = None;
            let mut i = 0usize;
            while i < list.len() {
                let ci = list[i];
                i += 1;
                let clause = &mut self.clauses[ci as usize];
                // watched literals live at positions 0 and 1
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                debug_assert_eq!(clause[1], false_lit);
                let first = clause[0];
                if value_of(&self.assign, first) == 1 {
                    list[keep] = ci;
                    keep += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    if value_of(&self.assign, clause[k]) != -1 {
                        clause.swap(1, k);
                        let w = clause[1];
                        self.watches[code(w)].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // clause is unit or conflicting under the current trail
                list[keep] = ci;
                keep += 1;
                if self.value(first) == -1 {
                    while i < list.len() {
                        list[keep] = list[i];
                        keep += 1;
                        i += 1;
                    }
                    conflict = Some(ci);
                    break;
                }
                self.enqueue(first, ci as i32);
            }
            list.truncate(keep);
            self.watches[code(false_lit)] = list;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > ACTIVITY_LIMIT {
            for a in &mut self.activity {
                *a *= 1.0 / ACTIVITY_LIMIT;
            }
            self.var_inc *= 1.0 / ACTIVITY_LIMIT;
        }
    }

    /// First-UIP conflict analysis. Returns the learnt clause with the
    /// asserting literal first and the backjump level.
    fn analyze(&mut self, conflict: u32) -> (Vec<i32>, u32) {
        let current = self.decision_level();
        let mut learnt: Vec<i32> = alloc::vec![0];
        let mut counter = 0usize;
        let mut p: i32 = 0;
        let mut idx = self.trail.len();
        let mut ci = conflict as usize;
        loop {
            let skip = usize::from(p != 0);
            for k in skip..self.clauses[ci].len() {
                let q = self.clauses[ci][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            p = self.trail[idx];
            self.seen[var(p)] = false;
            counter -= 1;
            if counter == 0 {
                break;
            }
            ci = self.reason[var(p)] as usize;
        }
        learnt[0] = -p;
        // second watch must sit at the backjump level
        let mut blevel = 0;
        if learnt.len() > 1 {
            let mut at = 1;
            for k in 1..learnt.len() {
                if self.level[var(learnt[k])] > self.level[var(learnt[at])] {
                    at = k;
                }
            }
            learnt.swap(1, at);
            blevel = self.level[var(learnt[1])];
        }
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        (learnt, blevel)
    }

    fn backtrack(&mut self, target: u32) {
        while self.decision_level() > target {
            let bound = self.lim.pop().unwrap();
            while self.trail.len() > bound {
                let l = self.trail.pop().unwrap();
                let v = var(l);
                self.phase[v] = l > 0;
                self.assign[v] = 0;
                self.reason[v] = -1;
            }
        }
        self.qhead = self.trail.len();
    }

    fn decide(&mut self) {
        let mut best: Option<usize> = None;
        for v in 0..self.assign.len() {
            if self.assign[v] == 0
                && best.is_none_or(|b| self.activity[v] > self.activity[b])
            {
                best = Some(v);
            }
        }
        let v = best.expect("decide called with a full assignment");
        self.lim.push(self.trail.len());
        let l = if self.phase[v] { v as i32 + 1 } else { -(v as i32 + 1) };
        self.stats.decisions += 1;
        self.enqueue(l, -1);
    }

    fn out_of_budget(&mut self) -> bool {
        match &mut self.budget {
            Some(b) => b(),
            None => false,
        }
    }

    fn search(&mut self, nvars: usize) -> Result<Outcome, TimedOut> {
        let mut conflicts_here = 0u64;
        let mut restart_idx = 0u64;
        let mut threshold = RESTART_BASE * luby(restart_idx);
        loop {
            if let Some(ci) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_here += 1;
                if self.decision_level() == 0 {
                    return Ok(Outcome::Unsat);
                }
                let (learnt, blevel) = self.analyze(ci);
                self.backtrack(blevel);
                self.add_learnt(learnt);
                self.var_inc /= ACTIVITY_DECAY;
                if self.stats.conflicts.is_multiple_of(128) && self.out_of_budget() {
                    return Err(TimedOut);
                }
            } else if self.trail.len() == nvars {
                let values = self.assign.iter().map(|&a| a == 1).collect();
                return Ok(Outcome::Sat(Assignment::new(values)));
            } else {
                if conflicts_here >= threshold {
                    self.stats.restarts += 1;
                    restart_idx += 1;
                    threshold = RESTART_BASE * luby(restart_idx);
                    conflicts_here = 0;
                    self.backtrack(0);
                    if self.out_of_budget() {
                        return Err(TimedOut);
                    }
                    continue;
                }
                self.decide();
            }
        }
    }
}

pub(super) fn solve(
    clauses: &[Vec<i32>],
    nvars: usize,
    budget: Option<Budget<'_>>,
) -> Result<(Outcome, SolverStats), TimedOut> {
    let mut s = Solver::new(nvars, budget);
    if s.out_of_budget() {
        return Err(TimedOut);
    }
    for c in clauses {
        if let AddResult::TopConflict = s.add_input_clause(c) {
            return Ok((Outcome::Unsat, s.stats));
        }
    }
    let outcome = s.search(nvars)?;
    Ok((outcome, s.stats))
}

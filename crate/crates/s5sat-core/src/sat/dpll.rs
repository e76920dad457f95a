//! Plain DPLL used for differential testing against the CDCL engine. No
//! learning, no watches: unit propagation rescans the clause list, branching
//! takes the lowest unassigned variable, false first. Deliberately a
//! different machine from the CDCL path.

use alloc::vec::Vec;

use super::{Assignment, Budget, Outcome, SolverStats, TimedOut};

struct Dpll<'a, 'b> {
    clauses: &'a [Vec<i32>],
    assign: Vec<i8>,
    stats: SolverStats,
    budget: Option<Budget<'b>>,
    nodes: u64,
}

enum Propagated {
    Ok { trail_mark: Vec<i32> },
    Conflict { trail_mark: Vec<i32> },
}

impl<'a, 'b> Dpll<'a, 'b> {
    #[inline]
    fn value(&self, l: i32) -> i8 {
        let a = self.assign[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            a
        } else {
            -a
        }
    }

    fn set(&mut self, l: i32) {
        self.assign[(l.unsigned_abs() - 1) as usize] = if l > 0 { 1 } else { -1 };
        self.stats.propagations += 1;
    }

    fn unset(&mut self, l: i32) {
        self.assign[(l.unsigned_abs() - 1) as usize] = 0;
    }

    /// Scan-based unit propagation to fixpoint. Returns the literals it
    /// assigned so the caller can undo them.
    fn propagate(&mut self) -> Propagated {
        let mut trail_mark = Vec::new();
        loop {
            let mut changed = false;
            for clause in self.clauses {
                let mut unassigned: Option<i32> = None;
                let mut open = 0usize;
                let mut satisfied = false;
                for &l in clause {
                    match self.value(l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            open += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match open {
                    0 => return Propagated::Conflict { trail_mark },
                    1 => {
                        let l = unassigned.unwrap();
                        self.set(l);
                        trail_mark.push(l);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Propagated::Ok { trail_mark };
            }
        }
    }

    fn all_satisfied(&self) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| self.value(l) == 1))
    }

    fn undo(&mut self, trail: Vec<i32>) {
        for l in trail {
            self.unset(l);
        }
    }

    fn search(&mut self) -> Result<bool, TimedOut> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(512) {
            if let Some(b) = &mut self.budget {
                if b() {
                    return Err(TimedOut);
                }
            }
        }
        let trail = match self.propagate() {
            Propagated::Conflict { trail_mark } => {
                self.undo(trail_mark);
                return Ok(false);
            }
            Propagated::Ok { trail_mark } => trail_mark,
        };
        if self.all_satisfied() {
            return Ok(true);
        }
        let v = match self.assign.iter().position(|&a| a == 0) {
            Some(v) => v,
            None => {
                // fully assigned but some clause is false
                self.undo(trail);
                return Ok(false);
            }
        };
        self.stats.decisions += 1;
        for l in [-(v as i32 + 1), v as i32 + 1] {
            self.set(l);
            match self.search() {
                Ok(true) => return Ok(true),
                Ok(false) => self.unset(l),
                Err(t) => return Err(t),
            }
        }
        self.undo(trail);
        Ok(false)
    }
}

pub(super) fn solve(
    clauses: &[Vec<i32>],
    nvars: usize,
    mut budget: Option<Budget<'_>>,
) -> Result<(Outcome, SolverStats), TimedOut> {
    if let Some(b) = &mut budget {
        if b() {
            return Err(TimedOut);
        }
    }
    if clauses.iter().any(|c| c.is_empty()) {
        return Ok((Outcome::Unsat, SolverStats::default()));
    }
    let mut s = Dpll {
        clauses,
        assign: alloc::vec![0; nvars],
        stats: SolverStats::default(),
        budget,
        nodes: 0,
    };
    let sat = s.search()?;
    let outcome = if sat {
        // leave unassigned don't-cares false so the assignment is total
        let values = s.assign.iter().map(|&a| a == 1).collect();
        Outcome::Sat(Assignment::new(values))
    } else {
        Outcome::Unsat
    };
    Ok((outcome, s.stats))
}

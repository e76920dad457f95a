//! Embedded SAT backend: a CDCL solver with two-watched-literal propagation,
//! first-UIP learning, Luby restarts and activity branching, plus a plain
//! DPLL mode kept around for differential testing. Instances can also be
//! exchanged with external solvers through DIMACS.

mod cdcl;
mod dpll;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::encoder::{CnfInstance, VarName};

/// Total assignment over the allocated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// Truth value of variable `v` (1-based).
    pub fn value(&self, v: i32) -> bool {
        self.values[(v - 1) as usize]
    }

    /// Truth of an integer literal.
    pub fn literal(&self, l: i32) -> bool {
        let v = self.value(l.abs());
        if l > 0 {
            v
        } else {
            !v
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat(Assignment),
    Unsat,
}

/// The time budget ran out before a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimedOut;

impl fmt::Display for TimedOut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("solve budget exhausted")
    }
}

impl core::error::Error for TimedOut {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMode {
    Cdcl,
    Dpll,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Budget callback; returns true once the budget is exhausted. Checked at
/// solver entry and periodically during search, so a zero budget times out
/// deterministically.
pub type Budget<'a> = &'a mut dyn FnMut() -> bool;

pub fn assignment_satisfies(clauses: &[Vec<i32>], a: &Assignment) -> bool {
    clauses.iter().all(|c| c.iter().any(|&l| a.literal(l)))
}

/// Decides the instance with the chosen engine. `Sat` outcomes are verified
/// clause by clause before they are returned.
pub fn solve_with(
    c: &CnfInstance,
    mode: SolverMode,
    mut budget: Option<Budget<'_>>,
) -> Result<Outcome, TimedOut> {
    let (outcome, _) = solve_with_stats(c, mode, budget.take())?;
    Ok(outcome)
}

pub fn solve_with_stats(
    c: &CnfInstance,
    mode: SolverMode,
    budget: Option<Budget<'_>>,
) -> Result<(Outcome, SolverStats), TimedOut> {
    let nvars = c.var_count();
    let result = match mode {
        SolverMode::Cdcl => cdcl::solve(&c.clauses, nvars, budget),
        SolverMode::Dpll => dpll::solve(&c.clauses, nvars, budget),
    };
    let (outcome, stats) = result?;
    if let Outcome::Sat(a) = &outcome {
        debug_assert_eq!(a.len(), nvars);
        assert!(
            assignment_satisfies(&c.clauses, a),
            "solver returned a non-model"
        );
    }
    Ok((outcome, stats))
}

/// CDCL with no time budget.
pub fn solve(c: &CnfInstance, budget: Option<Budget<'_>>) -> Result<Outcome, TimedOut> {
    solve_with(c, SolverMode::Cdcl, budget)
}

/// Standard DIMACS CNF text. A comment block up front maps variables to
/// their tagged names; raw (opaque) variables get no comment.
pub fn emit_dimacs(c: &CnfInstance) -> String {
    let mut out = String::new();
    for (v, name) in c.varmap.iter() {
        if !matches!(name, VarName::Opaque(_)) {
            out.push_str(&alloc::format!("c {v} = {name}\n"));
        }
    }
    out.push_str(&alloc::format!("p cnf {} {}\n", c.var_count(), c.clause_count()));
    for clause in &c.clauses {
        for &l in clause {
            out.push_str(&alloc::format!("{l} "));
        }
        out.push_str("0\n");
    }
    out
}

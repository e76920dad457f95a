//! Subprocess bridge to an external DIMACS solver.
//!
//! Contract: the solver executable is invoked with one argument, the path
//! of a DIMACS CNF file. Its stdout must carry a verdict line `SAT` or
//! `UNSAT` (the competition-style `s SATISFIABLE` / `s UNSATISFIABLE` is
//! accepted too) and, for SAT, one or more lines of space-separated
//! literals (optionally `v `-prefixed, optionally 0-terminated). Returned
//! models are replayed against the instance before being trusted.

use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};

use s5sat_core::encoder::CnfInstance;
use s5sat_core::sat::{assignment_satisfies, emit_dimacs, Assignment, Outcome};

/// Environment variable naming the external solver executable.
pub const SOLVER_ENV: &str = "S5SAT_EXTERNAL_SOLVER";

#[derive(Debug)]
pub enum ExternalError {
    Io(io::Error),
    /// Solver output did not follow the contract.
    Protocol(String),
    /// The solver claimed SAT but its model falsifies some clause.
    BadModel,
}

impl std::fmt::Display for ExternalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExternalError::Io(e) => write!(f, "external solver io error: {e}"),
            ExternalError::Protocol(msg) => write!(f, "external solver protocol error: {msg}"),
            ExternalError::BadModel => f.write_str("external solver returned a bad model"),
        }
    }
}

impl std::error::Error for ExternalError {}

impl From<io::Error> for ExternalError {
    fn from(e: io::Error) -> Self {
        ExternalError::Io(e)
    }
}

fn scratch_path() -> PathBuf {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!(
        "s5sat-{}-{n}.cnf",
        std::process::id()
    ))
}

fn parse_output(text: &str, nvars: usize) -> Result<Outcome, ExternalError> {
    let mut verdict: Option<bool> = None;
    let mut lits: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        if verdict.is_none() {
            match line {
                "SAT" => verdict = Some(true),
                "UNSAT" => verdict = Some(false),
                _ if line.starts_with("s ") => {
                    if line.contains("UNSATISFIABLE") {
                        verdict = Some(false);
                    } else if line.contains("SATISFIABLE") {
                        verdict = Some(true);
                    }
                }
                _ => {
                    return Err(ExternalError::Protocol(format!(
                        "unexpected line before verdict: `{line}`"
                    )))
                }
            }
            continue;
        }
        let body = line.strip_prefix("v ").unwrap_or(line);
        for tok in body.split_whitespace() {
            let val: i64 = tok
                .parse()
                .map_err(|_| ExternalError::Protocol(format!("bad literal `{tok}`")))?;
            if val != 0 {
                lits.push(val);
            }
        }
    }
    match verdict {
        Some(false) => Ok(Outcome::Unsat),
        Some(true) => {
            let mut values = vec![false; nvars];
            for l in lits {
                let v = l.unsigned_abs() as usize;
                if v >= 1 && v <= nvars {
                    values[v - 1] = l > 0;
                }
            }
            Ok(Outcome::Sat(Assignment::new(values)))
        }
        None => Err(ExternalError::Protocol("no verdict line".into())),
    }
}

/// Runs the external solver on the instance and returns its (validated)
/// outcome.
pub fn solve_external(solver: &str, instance: &CnfInstance) -> Result<Outcome, ExternalError> {
    let path = scratch_path();
    fs::write(&path, emit_dimacs(instance))?;
    let output = Command::new(solver).arg(&path).output();
    let _ = fs::remove_file(&path);
    let output = output?;
    let text = String::from_utf8_lossy(&output.stdout);
    let outcome = parse_output(&text, instance.var_count())?;
    if let Outcome::Sat(a) = &outcome {
        if !assignment_satisfies(&instance.clauses, a) {
            return Err(ExternalError::BadModel);
        }
    }
    Ok(outcome)
}

/// The configured external solver path, if any.
pub fn configured_solver() -> Option<String> {
    std::env::var(SOLVER_ENV).ok().filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_contract() {
        let out = parse_output("SAT\n1 -2 3 0\n", 3).unwrap();
        match out {
            Outcome::Sat(a) => {
                assert!(a.value(1));
                assert!(!a.value(2));
                assert!(a.value(3));
            }
            Outcome::Unsat => panic!(),
        }
        assert_eq!(parse_output("UNSAT\n", 2).unwrap(), Outcome::Unsat);
    }

    #[test]
    fn parses_competition_style() {
        let out = parse_output("c a comment\ns SATISFIABLE\nv 1 -2 0\n", 2).unwrap();
        assert!(matches!(out, Outcome::Sat(_)));
        assert_eq!(
            parse_output("s UNSATISFIABLE\n", 2).unwrap(),
            Outcome::Unsat
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_output("maybe\n", 2).is_err());
        assert!(parse_output("", 2).is_err());
    }
}

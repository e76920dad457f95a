//! Black-box tests of the command-line interface: exit codes, report
//! formats, file exports and the external-solver hook.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_s5sat"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("s5sat-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const EXAMPLE1: &str = "p & box(p | q) & (dia(p & q) | dia(~p & ~q))";

#[test]
fn sat_run_with_model_and_verify() {
    let out = run_stdin(&["--encoding", "reach", "--model", "--verify"], EXAMPLE1);
    assert_eq!(out.status.code(), Some(10));
    let text = stdout(&out);
    assert!(text.contains("SAT\n"));
    assert!(text.contains("w0: {"));
}

#[test]
fn unsat_run_with_conflicts() {
    let out = run_stdin(
        &["--encoding", "reach", "--conflicts"],
        "box(~p | ~q) & dia(p & q & s)",
    );
    assert_eq!(out.status.code(), Some(20));
    assert!(stdout(&out).contains("UNSAT"));
}

#[test]
fn stats_show_smaller_reach_instance() {
    let source = "box(p | q) & dia(p) & dia(~p)";
    let full = run_stdin(&["--encoding", "full", "--stats"], source);
    let reach = run_stdin(&["--encoding", "reach", "--stats"], source);
    let count = |out: &Output| -> usize {
        stdout(out)
            .lines()
            .find(|l| l.starts_with("c clauses"))
            .and_then(|l| l.split_whitespace().last())
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(count(&full), 14);
    assert_eq!(count(&reach), 13);
}

#[test]
fn verdict_stable_across_encoding_flags() {
    for args in [
        &["--encoding", "full"][..],
        &["--encoding", "reach"][..],
        &["--encoding", "reach", "--conflicts"][..],
        &["--encoding", "reach", "--boxes"][..],
        &["--encoding", "reach", "--diamonds"][..],
        &["--encoding", "reach", "--all"][..],
    ] {
        let out = run_stdin(args, EXAMPLE1);
        assert_eq!(out.status.code(), Some(10), "flags {args:?}");
    }
}

#[test]
fn dimacs_export() {
    let path = scratch("ex1.cnf");
    let out = run_stdin(&["--dimacs", path.to_str().unwrap()], EXAMPLE1);
    assert_eq!(out.status.code(), Some(10));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("p cnf "));
    assert!(text.contains("c 1 = "));
    assert!(text.trim_end().ends_with(" 0"));
}

#[test]
fn asp_export() {
    let prefix = scratch("ex1");
    let out = run_stdin(
        &["--encoding", "reach", "--asp", prefix.to_str().unwrap()],
        EXAMPLE1,
    );
    assert_eq!(out.status.code(), Some(10));
    let facts = fs::read_to_string(scratch("ex1.facts.lp")).unwrap();
    let program = fs::read_to_string(scratch("ex1.program.lp")).unwrap();
    assert!(facts.contains("pos_box(b1,p).\n"));
    assert!(program.contains("% r26"));
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let bad_parse = run_stdin(&[], "p & & q");
    assert_eq!(bad_parse.status.code(), Some(1));
    let bad_combo = run_stdin(&["--encoding", "full", "--boxes"], "p");
    assert_eq!(bad_combo.status.code(), Some(1));
    let unknown_flag = bin().arg("--frobnicate").output().unwrap();
    assert_eq!(unknown_flag.status.code(), Some(1));
    let missing_file = bin().arg("/nonexistent/input.s5").output().unwrap();
    assert_eq!(missing_file.status.code(), Some(1));
}

#[test]
fn reserved_atom_rejected() {
    let out = run_stdin(&[], "aux1 & p");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn zero_timeout_reports_timeout() {
    let out = run_stdin(&["--timeout", "0.0"], EXAMPLE1);
    assert_eq!(out.status.code(), Some(30));
    assert!(stdout(&out).contains("TIMEOUT"));
}

#[test]
fn intohylo_input_from_file() {
    let path = scratch("bench.intohylo");
    fs::write(&path, "begin ([r1](p1 | p2) & <r1> ~p1) end").unwrap();
    let out = bin().arg(path.to_str().unwrap()).output().unwrap();
    assert_eq!(out.status.code(), Some(10));

    let bad = scratch("bad.intohylo");
    fs::write(&bad, "begin [r2] p1 end").unwrap();
    let out = bin().arg(bad.to_str().unwrap()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_flag_agrees() {
    let out = run_stdin(&["--oracle"], EXAMPLE1);
    assert_eq!(out.status.code(), Some(10));
    let unsat = run_stdin(&["--oracle"], "box(p) & dia(~p)");
    assert_eq!(unsat.status.code(), Some(20));
}

#[test]
fn dpll_engine_selectable() {
    let out = run_stdin(&["--dpll", "--verify"], EXAMPLE1);
    assert_eq!(out.status.code(), Some(10));
}

#[cfg(unix)]
mod external_solver {
    use super::*;
    use std::os::unix::fs::PermissionsExt;

    fn fake_solver(name: &str, script_body: &str) -> PathBuf {
        let path = scratch(name);
        fs::write(&path, format!("#!/bin/sh\n{script_body}\n")).unwrap();
        let mut perms = fs::metadata(&path).unwrap().permissions();
        perms.set_mode(0o755);
        fs::set_permissions(&path, perms).unwrap();
        path
    }

    /// A fake external solver that echoes a correct model for the instance
    /// `p` (one variable, one clause) exercises the subprocess plumbing.
    #[test]
    fn agreeing_external_solver_passes() {
        let solver = fake_solver("agree.sh", "echo SAT; echo 1 0");
        let out = bin()
            .env("S5SAT_EXTERNAL_SOLVER", solver.to_str().unwrap())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .arg("--stats")
            .spawn()
            .and_then(|mut c| {
                c.stdin.as_mut().unwrap().write_all(b"p").unwrap();
                c.wait_with_output()
            })
            .unwrap();
        assert_eq!(out.status.code(), Some(10), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).contains("external-agrees"));
    }

    #[test]
    fn disagreeing_external_solver_fails_loudly() {
        let solver = fake_solver("disagree.sh", "echo UNSAT");
        let out = bin()
            .env("S5SAT_EXTERNAL_SOLVER", solver.to_str().unwrap())
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .and_then(|mut c| {
                c.stdin.as_mut().unwrap().write_all(b"p").unwrap();
                c.wait_with_output()
            })
            .unwrap();
        assert_eq!(out.status.code(), Some(2));
    }
}

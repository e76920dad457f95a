//! Command-line front end for the S5 satisfiability toolkit: reads a
//! formula, normalises and compiles it with the selected encoding, decides
//! it, and reports the verdict with optional model reconstruction,
//! verification, oracle cross-checks, DIMACS/ASP export and statistics.

pub mod external;

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use s5sat_core::asp::{emit_facts, emit_program, AspVariant};
use s5sat_core::encoder::{encode, EncodingKind, EnrichmentSet};
use s5sat_core::kripke::{extract_model, verify};
use s5sat_core::normalizer::normalize;
use s5sat_core::oracle::brute_force;
use s5sat_core::parser::{parse, SourceFormat};
use s5sat_core::sat::{emit_dimacs, solve_with_stats, Outcome, SolverMode};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_TIMEOUT: i32 = 30;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Clone, Debug)]
pub enum Input {
    Stdin,
    Path(PathBuf),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: Input,
    pub format: Option<SourceFormat>,
    pub encoding: EncodingKind,
    pub enrichments: EnrichmentSet,
    pub dimacs_out: Option<PathBuf>,
    pub asp_out: Option<PathBuf>,
    pub print_model: bool,
    pub verify_model: bool,
    pub oracle_check: bool,
    pub stats: bool,
    pub timeout: Option<f64>,
    pub mode: SolverMode,
}

impl RunConfig {
    pub fn new(input: Input) -> RunConfig {
        RunConfig {
            input,
            format: None,
            encoding: EncodingKind::Reach,
            enrichments: EnrichmentSet::none(),
            dimacs_out: None,
            asp_out: None,
            print_model: false,
            verify_model: false,
            oracle_check: false,
            stats: false,
            timeout: None,
            mode: SolverMode::Cdcl,
        }
    }
}

fn format_for(path: Option<&Path>, requested: Option<SourceFormat>) -> SourceFormat {
    if let Some(fmt) = requested {
        return fmt;
    }
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("intohylo") => SourceFormat::Intohylo,
        _ => SourceFormat::Native,
    }
}

fn asp_variant(encoding: EncodingKind, enr: &EnrichmentSet) -> Option<AspVariant> {
    match (encoding, enr.conflicts, enr.boxes, enr.diamonds) {
        (EncodingKind::Full, false, false, false) => Some(AspVariant::Full),
        (EncodingKind::Reach, false, false, false) => Some(AspVariant::Reach),
        (EncodingKind::Reach, true, false, false) => Some(AspVariant::ReachConflicts),
        (EncodingKind::Reach, false, true, false) => Some(AspVariant::ReachBoxes),
        (EncodingKind::Reach, false, false, true) => Some(AspVariant::ReachDiamonds),
        (EncodingKind::Reach, true, true, true) => Some(AspVariant::ReachAll),
        _ => None,
    }
}

fn millis(d: Duration) -> String {
    format!("{:.2}ms", d.as_secs_f64() * 1e3)
}

/// Runs the whole pipeline and returns the process exit code. Reports go to
/// stdout, diagnostics to stderr.
pub fn run(cfg: &RunConfig) -> i32 {
    let started = Instant::now();

    let (text, path) = match &cfg.input {
        Input::Stdin => {
            let mut buf = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
                eprintln!("error: cannot read stdin: {e}");
                return EXIT_USAGE;
            }
            (buf, None)
        }
        Input::Path(p) => match fs::read_to_string(p) {
            Ok(buf) => (buf, Some(p.clone())),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return EXIT_USAGE;
            }
        },
    };
    let format = format_for(path.as_deref(), cfg.format);

    if !cfg.enrichments.is_empty() && cfg.encoding != EncodingKind::Reach {
        eprintln!("error: enrichments require --encoding reach");
        return EXIT_USAGE;
    }
    if let Some(secs) = cfg.timeout {
        if !secs.is_finite() || secs < 0.0 {
            eprintln!("error: --timeout must be a nonnegative number of seconds");
            return EXIT_USAGE;
        }
    }

    let formula = match parse(&text, format) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("parse error: {e}");
            return EXIT_USAGE;
        }
    };

    let t_norm = Instant::now();
    let nf = normalize(formula.clone());
    let norm_time = t_norm.elapsed();

    let t_enc = Instant::now();
    let instance = encode(&nf, cfg.encoding, cfg.enrichments);
    let enc_time = t_enc.elapsed();

    let mut report = String::new();
    if cfg.stats {
        let _ = writeln!(report, "c atoms          {}", nf.atoms.len());
        let _ = writeln!(report, "c s5-clauses     {}", nf.clauses.len());
        let _ = writeln!(report, "c boxes          {}", nf.box_count());
        let _ = writeln!(report, "c diamonds       {}", nf.diamond_count());
        let _ = writeln!(report, "c normalize-time {}", millis(norm_time));
        let mut enc_name = format!("{}", cfg.encoding);
        for (flag, name) in [
            (cfg.enrichments.conflicts, "conflicts"),
            (cfg.enrichments.boxes, "boxes"),
            (cfg.enrichments.diamonds, "diamonds"),
        ] {
            if flag {
                enc_name.push('+');
                enc_name.push_str(name);
            }
        }
        let _ = writeln!(report, "c encoding       {enc_name}");
        let _ = writeln!(report, "c variables      {}", instance.var_count());
        let _ = writeln!(report, "c clauses        {}", instance.clause_count());
        let _ = writeln!(report, "c encode-time    {}", millis(enc_time));
    }

    if let Some(out) = &cfg.dimacs_out {
        if let Err(e) = fs::write(out, emit_dimacs(&instance)) {
            eprintln!("error: cannot write {}: {e}", out.display());
            return EXIT_USAGE;
        }
    }
    if let Some(prefix) = &cfg.asp_out {
        if nf.is_trivially_false() {
            eprintln!(
                "warning: input collapsed to a trivially false form; skipping ASP export"
            );
        } else {
            let Some(variant) = asp_variant(cfg.encoding, &cfg.enrichments) else {
                eprintln!(
                    "error: this enrichment combination has no ASP program \
                     (use one enrichment, or --all)"
                );
                return EXIT_USAGE;
            };
            let prefix_str = prefix.display();
            let facts_path = PathBuf::from(format!("{prefix_str}.facts.lp"));
            let program_path = PathBuf::from(format!("{prefix_str}.program.lp"));
            let write = fs::write(&facts_path, emit_facts(&nf, variant))
                .and_then(|_| fs::write(&program_path, emit_program(variant)));
            if let Err(e) = write {
                eprintln!("error: cannot write ASP files: {e}");
                return EXIT_USAGE;
            }
        }
    }

    let t_solve = Instant::now();
    let deadline = cfg.timeout.map(|secs| {
        (Instant::now(), Duration::from_secs_f64(secs))
    });
    let mut budget = deadline.map(|(start, limit)| move || start.elapsed() >= limit);
    let budget_dyn: Option<&mut dyn FnMut() -> bool> = match &mut budget {
        Some(f) => Some(f),
        None => None,
    };
    let solved = solve_with_stats(&instance, cfg.mode, budget_dyn);
    let solve_time = t_solve.elapsed();

    let (outcome, stats) = match solved {
        Ok(pair) => pair,
        Err(_) => {
            print!("{report}");
            println!("TIMEOUT");
            return EXIT_TIMEOUT;
        }
    };

    if cfg.stats {
        let _ = writeln!(report, "c decisions      {}", stats.decisions);
        let _ = writeln!(report, "c conflicts      {}", stats.conflicts);
        let _ = writeln!(report, "c propagations   {}", stats.propagations);
        let _ = writeln!(report, "c restarts       {}", stats.restarts);
        let _ = writeln!(report, "c solve-time     {}", millis(solve_time));
        let _ = writeln!(report, "c total-time     {}", millis(started.elapsed()));
    }

    // differential check against an external DIMACS solver, when configured
    if let Some(solver) = external::configured_solver() {
        match external::solve_external(&solver, &instance) {
            Ok(ext) => {
                let agree = matches!(
                    (&outcome, &ext),
                    (Outcome::Sat(_), Outcome::Sat(_)) | (Outcome::Unsat, Outcome::Unsat)
                );
                if !agree {
                    eprintln!("error: external solver disagrees with embedded verdict");
                    return EXIT_VERIFICATION;
                }
                let _ = writeln!(report, "c external-agrees yes");
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_VERIFICATION;
            }
        }
    }

    if cfg.oracle_check {
        match brute_force(&formula, None) {
            Ok(verdict) => {
                if verdict.is_sat() != matches!(outcome, Outcome::Sat(_)) {
                    eprintln!("error: brute-force oracle disagrees with the pipeline");
                    return EXIT_VERIFICATION;
                }
                let _ = writeln!(report, "c oracle-agrees  yes");
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        }
    }

    print!("{report}");
    match outcome {
        Outcome::Sat(assignment) => {
            let model = match extract_model(&assignment, &instance) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: model extraction failed: {e}");
                    return EXIT_VERIFICATION;
                }
            };
            if cfg.verify_model && !verify(&formula, &model) {
                println!("SAT");
                eprintln!("error: reconstructed model fails verification");
                return EXIT_VERIFICATION;
            }
            println!("SAT");
            if cfg.print_model {
                print!("{}", model.render());
            }
            EXIT_SAT
        }
        Outcome::Unsat => {
            println!("UNSAT");
            EXIT_UNSAT
        }
    }
}

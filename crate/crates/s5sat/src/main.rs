use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use s5sat::{run, Input, RunConfig, EXIT_USAGE};
use s5sat_core::encoder::{EncodingKind, EnrichmentSet};
use s5sat_core::parser::SourceFormat;
use s5sat_core::sat::SolverMode;

/// S5 satisfiability solver: normalises a modal formula, compiles it to
/// propositional CNF and decides it, reconstructing a verified model of
/// possible worlds for satisfiable inputs.
///
/// Exit codes: 10 satisfiable, 20 unsatisfiable, 30 timeout, 1 usage or
/// parse error, 2 internal verification failure.
#[derive(Parser, Debug)]
#[command(name = "s5sat", version, disable_help_subcommand = true)]
struct Cli {
    /// Input file (`.s5` native, `.intohylo` benchmark); `-` reads stdin.
    #[arg(default_value = "-")]
    input: String,

    /// Input syntax; defaults by file extension, native for stdin.
    #[arg(long, value_parser = ["native", "intohylo"])]
    format: Option<String>,

    /// CNF compilation scheme.
    #[arg(long, default_value = "reach", value_parser = ["full", "reach"])]
    encoding: String,

    /// Add box/diamond conflict clauses (requires --encoding reach).
    #[arg(long)]
    conflicts: bool,

    /// Add box subset clauses (requires --encoding reach).
    #[arg(long)]
    boxes: bool,

    /// Merge subset-related diamond worlds (requires --encoding reach).
    #[arg(long)]
    diamonds: bool,

    /// Enable all three enrichments.
    #[arg(long)]
    all: bool,

    /// Write the compiled instance as DIMACS CNF.
    #[arg(long, value_name = "PATH")]
    dimacs: Option<PathBuf>,

    /// Write ASP facts and program as <PREFIX>.facts.lp / <PREFIX>.program.lp.
    #[arg(long, value_name = "PREFIX")]
    asp: Option<PathBuf>,

    /// Print the reconstructed model on SAT.
    #[arg(long)]
    model: bool,

    /// Re-check the reconstructed model against the input formula.
    #[arg(long)]
    verify: bool,

    /// Cross-check the verdict with the brute-force oracle (small inputs).
    #[arg(long)]
    oracle: bool,

    /// Print normal-form, encoding and solver statistics.
    #[arg(long)]
    stats: bool,

    /// Time budget for the solver, in seconds.
    #[arg(long, value_name = "S")]
    timeout: Option<f64>,

    /// Use the plain DPLL engine instead of CDCL.
    #[arg(long)]
    dpll: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    let input = if cli.input == "-" {
        Input::Stdin
    } else {
        Input::Path(PathBuf::from(&cli.input))
    };
    let mut cfg = RunConfig::new(input);
    cfg.format = cli.format.as_deref().map(|f| match f {
        "intohylo" => SourceFormat::Intohylo,
        _ => SourceFormat::Native,
    });
    cfg.encoding = match cli.encoding.as_str() {
        "full" => EncodingKind::Full,
        _ => EncodingKind::Reach,
    };
    cfg.enrichments = if cli.all {
        EnrichmentSet::all()
    } else {
        EnrichmentSet { conflicts: cli.conflicts, boxes: cli.boxes, diamonds: cli.diamonds }
    };
    cfg.dimacs_out = cli.dimacs;
    cfg.asp_out = cli.asp;
    cfg.print_model = cli.model;
    cfg.verify_model = cli.verify;
    cfg.oracle_check = cli.oracle;
    cfg.stats = cli.stats;
    cfg.timeout = cli.timeout;
    cfg.mode = if cli.dpll { SolverMode::Dpll } else { SolverMode::Cdcl };

    ExitCode::from(run(&cfg) as u8)
}

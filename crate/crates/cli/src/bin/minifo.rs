//! A small first-order resolution prover, used as the default backend.
//! Reads one TPTP file and prints one SZS status line.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;

use hol_core::atp::SzsStatus;
use hol_core::fol::{from_hol, prove_problem, FoResult, ProverLimits};
use hol_core::tptp::parse_file;

#[derive(Parser)]
#[command(name = "minifo", version, about = "First-order resolution prover with SZS output")]
struct Args {
    /// Time limit in seconds.
    #[arg(long, default_value_t = 10.0)]
    timeout: f64,

    /// Clause count at which the prover gives up.
    #[arg(long, default_value_t = 50_000)]
    max_clauses: usize,

    file: PathBuf,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let report = |s: SzsStatus| {
        println!("% SZS status {s} for {}", args.file.display());
        if s.is_solved() {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    };
    let problem = match parse_file(&args.file).map_err(|e| e.to_string()).and_then(|p| {
        let conj = p.has_conjecture();
        from_hol(&p).map(|fo| (fo, conj)).map_err(|e| e.to_string())
    }) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("minifo: {e}");
            return report(SzsStatus::Error);
        }
    };
    let (fo, conjecture) = problem;
    let limits = ProverLimits {
        timeout: Duration::from_secs_f64(args.timeout.max(0.0)),
        max_clauses: args.max_clauses,
        ..ProverLimits::default()
    };
    let status = match (prove_problem(&fo, &limits), conjecture) {
        (FoResult::Unsatisfiable, true) => SzsStatus::Theorem,
        (FoResult::Unsatisfiable, false) => SzsStatus::Unsatisfiable,
        (FoResult::Satisfiable, true) => SzsStatus::CounterSatisfiable,
        (FoResult::Satisfiable, false) => SzsStatus::Satisfiable,
        (FoResult::GaveUp, _) => SzsStatus::GaveUp,
        (FoResult::Timeout, _) => SzsStatus::Timeout,
    };
    report(status)
}

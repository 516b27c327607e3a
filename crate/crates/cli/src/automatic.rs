//! Automatic mode: one SZS line per input file on standard output,
//! everything else on standard error.

use std::io::Write;
use std::path::Path;
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use hol_core::atp::SzsStatus;
use hol_core::search::{prove, SearchConfig, SzsResult};
use hol_core::tptp::parse_file;

use crate::options::CliConfig;

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_UNSOLVED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Slack the watchdog allows past the budget before it answers for the
/// prover. Well below the two seconds a harness tolerates.
const WATCHDOG_SLACK: Duration = Duration::from_millis(1500);

pub fn szs_line(status: SzsStatus, file: &Path) -> String {
    format!("% SZS status {status} for {}", file.display())
}

pub fn exit_code(status: SzsStatus) -> i32 {
    match status {
        s if s.is_solved() => EXIT_SOLVED,
        SzsStatus::Error => EXIT_ERROR,
        _ => EXIT_UNSOLVED,
    }
}

fn report_proof(r: &SzsResult, verbose: u8) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "% schedule {} [{}], decided by {}",
        r.schedule.policy,
        r.schedule
            .strategies
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join(", "),
        r.strategy.as_deref().unwrap_or("-")
    );
    if !r.proof.is_empty() {
        let _ = writeln!(err, "% SZS output start Refutation");
        for c in &r.proof {
            let parents: Vec<String> = c.origin.parents.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(err, "{}: {}  ({} {})", c.id, c, c.origin.rule, parents.join(","));
        }
        let _ = writeln!(err, "% SZS output end Refutation");
    } else if !r.model_basis.is_empty() {
        let _ = writeln!(err, "% SZS output start Saturation");
        for c in &r.model_basis {
            let _ = writeln!(err, "{}: {}", c.id, c);
        }
        let _ = writeln!(err, "% SZS output end Saturation");
    }
    if verbose > 1 {
        for t in &r.trace {
            let _ = writeln!(err, "% {t}");
        }
    }
}

/// Proves one file under a watchdog that reports `Timeout` itself if the
/// search overruns its budget.
fn run_file(file: &Path, cfg: &SearchConfig, verbose: u8) -> i32 {
    let p = match parse_file(file) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            println!("{}", szs_line(SzsStatus::Error, file));
            return EXIT_ERROR;
        }
    };
    let reported = Arc::new(Mutex::new(false));
    let (done, cancelled) = mpsc::channel::<()>();
    let watchdog = {
        let reported = Arc::clone(&reported);
        let line = szs_line(SzsStatus::Timeout, file);
        let limit = cfg.budget + WATCHDOG_SLACK;
        thread::spawn(move || {
            if cancelled.recv_timeout(limit) == Err(mpsc::RecvTimeoutError::Timeout) {
                let mut r = reported.lock().unwrap_or_else(|e| e.into_inner());
                if !*r {
                    *r = true;
                    println!("{line}");
                    let _ = std::io::stdout().flush();
                    std::process::exit(EXIT_UNSOLVED);
                }
            }
        })
    };
    let r = prove(&p, cfg);
    {
        let mut rep = reported.lock().unwrap_or_else(|e| e.into_inner());
        if !*rep {
            *rep = true;
            println!("{}", szs_line(r.status, file));
            let _ = std::io::stdout().flush();
        }
    }
    let _ = done.send(());
    let _ = watchdog.join();
    if verbose > 0 {
        report_proof(&r, verbose);
    }
    exit_code(r.status)
}

/// Runs every input file in turn, each with the full budget. The exit code
/// is the worst over all files.
pub fn run_automatic(cli: &CliConfig) -> i32 {
    let cfg = match cli.search_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("holprove: {e}");
            for f in &cli.files {
                println!("{}", szs_line(SzsStatus::Error, f));
            }
            return EXIT_ERROR;
        }
    };
    if let Some(b) = &cfg.backend {
        log::info!("backend {} at {}", b.name, b.command);
    }
    cli.files
        .iter()
        .map(|f| run_file(f, &cfg, cli.verbose))
        .max()
        .unwrap_or(EXIT_SOLVED)
}

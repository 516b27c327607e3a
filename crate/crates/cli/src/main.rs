use std::fs::File;
use std::io::{self, BufReader, IsTerminal};
use std::process::ExitCode;

use hol_cli::{repl_loop, run_automatic, CliConfig, Session, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = match CliConfig::parse_args(std::env::args()) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    if cli.interactive || cli.script.is_some() {
        let cfg = match cli.search_config() {
            Ok(c) => c,
            Err(e) => {
                eprintln!("holprove: {e}");
                return ExitCode::from(EXIT_ERROR as u8);
            }
        };
        let mut session = Session::from_config(&cfg);
        let stdout = io::stdout().lock();
        for f in &cli.files {
            let out = session.line(&format!("load {}", f.display())).unwrap_or_default();
            println!("{out}");
        }
        let res = match &cli.script {
            Some(path) => match File::open(path) {
                Ok(f) => repl_loop(&mut session, BufReader::new(f), stdout, true, false),
                Err(e) => {
                    eprintln!("holprove: {}: {e}", path.display());
                    return ExitCode::from(EXIT_ERROR as u8);
                }
            },
            None => {
                let prompt = io::stdin().is_terminal();
                repl_loop(&mut session, io::stdin().lock(), stdout, false, prompt)
            }
        };
        return match res {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("holprove: {e}");
                ExitCode::from(EXIT_ERROR as u8)
            }
        };
    }

    if cli.files.is_empty() {
        eprintln!("holprove: no input files (try --help)");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    ExitCode::from(run_automatic(&cli) as u8)
}

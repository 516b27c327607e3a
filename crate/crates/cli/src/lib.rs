//! Front end of the prover. Automatic mode prints one SZS line per
//! problem; the interactive loop exposes the calculus rule by rule.

pub mod automatic;
pub mod options;
pub mod repl;

pub use automatic::{exit_code, run_automatic, szs_line, EXIT_ERROR, EXIT_SOLVED, EXIT_UNSOLVED};
pub use options::CliConfig;
pub use repl::{repl_loop, ReplCommand, Session};

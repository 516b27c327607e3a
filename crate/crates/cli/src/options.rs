//! Command-line options.

use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::Parser;

use hol_core::atp::{AtpConfig, BackendConfig};
use hol_core::calculus::PrimSubstMode;
use hol_core::clausify::ExtOptions;
use hol_core::fol::TranslationMode;
use hol_core::search::{Overrides, PolicyTable, SearchConfig};

/// Options written with a single dash, as the prover has always spelled
/// them. They are rewritten to `--name` before parsing.
const SINGLE_DASH: [&str; 4] = ["-nuc", "-nrleq", "-nraeq", "-ps"];

#[derive(Parser, Debug, Clone)]
#[command(
    name = "holprove",
    version,
    about = "A higher-order saturation prover for THF0 problems"
)]
pub struct CliConfig {
    /// Problem files in TPTP syntax.
    pub files: Vec<PathBuf>,

    /// Total time budget in seconds.
    #[arg(short = 't', long = "timeout", default_value_t = 60.0)]
    pub timeout: f64,

    /// Disable the choice rules (`-nuc`).
    #[arg(long = "nuc")]
    pub no_choice: bool,

    /// Disable the Leibniz equality rule (`-nrleq`).
    #[arg(long = "nrleq")]
    pub no_leib_eq: bool,

    /// Disable the Andrews equality rule (`-nraeq`).
    #[arg(long = "nraeq")]
    pub no_andr_eq: bool,

    /// Primitive substitution level (`-ps N`): 0 off, 1 connectives, 2 also quantifiers.
    #[arg(long = "ps", value_parser = clap::value_parser!(u8).range(0..=2))]
    pub ps: Option<u8>,

    /// First-order translation used for the backend.
    #[arg(long = "translation")]
    pub translation: Option<TranslationMode>,

    /// Backend as NAME=PATH.
    #[arg(long = "atp")]
    pub atp: Option<String>,

    /// Per-call backend timeout in seconds.
    #[arg(long = "atp-timeout")]
    pub atp_timeout: Option<f64>,

    /// Backend configuration file.
    #[arg(long = "atp-config")]
    pub atp_config: Option<PathBuf>,

    /// Never call a backend.
    #[arg(long = "no-atp")]
    pub no_atp: bool,

    /// Start the interactive command loop.
    #[arg(long = "interactive")]
    pub interactive: bool,

    /// Run interactive commands from a file.
    #[arg(long = "script")]
    pub script: Option<PathBuf>,

    /// More output: the proof on standard error, then debug logging.
    #[arg(short = 'v', action = clap::ArgAction::Count)]
    pub verbose: u8,

    /// Keep the problem files written for the backend.
    #[arg(long = "keep-temp")]
    pub keep_temp: bool,

    #[arg(long = "no-boolean-ext")]
    pub no_boolean_ext: bool,

    #[arg(long = "no-functional-ext")]
    pub no_functional_ext: bool,

    /// Strategy schedule table replacing the built-in one.
    #[arg(long = "schedule")]
    pub schedule: Option<PathBuf>,
}

impl CliConfig {
    /// Parses arguments, accepting the single-dash spellings.
    pub fn parse_args<I: IntoIterator<Item = String>>(args: I) -> Result<CliConfig, clap::Error> {
        let args = args.into_iter().map(|a| {
            if SINGLE_DASH.contains(&a.as_str()) {
                format!("-{a}")
            } else {
                a
            }
        });
        CliConfig::try_parse_from(args)
    }

    pub fn ext(&self) -> ExtOptions {
        ExtOptions {
            boolean_ext: !self.no_boolean_ext,
            functional_ext: !self.no_functional_ext,
        }
    }

    pub fn overrides(&self) -> Overrides {
        Overrides {
            no_choice: self.no_choice,
            no_leib_eq: self.no_leib_eq,
            no_andr_eq: self.no_andr_eq,
            ps: self.ps.and_then(PrimSubstMode::from_level),
            translation: self.translation,
            no_backend: self.no_atp,
        }
    }

    pub fn budget(&self) -> Duration {
        Duration::from_secs_f64(self.timeout.max(0.0))
    }

    /// The backend to use: `--atp`, else the config file's first enabled
    /// entry, else the bundled `minifo` next to this executable.
    pub fn backend(&self) -> Result<Option<BackendConfig>, String> {
        if self.no_atp {
            return Ok(None);
        }
        let timeout = self.atp_timeout.unwrap_or(10.0);
        let mut b = if let Some(spec) = &self.atp {
            Some(BackendConfig::from_spec(spec, timeout).map_err(|e| e.to_string())?)
        } else if let Some(path) = &self.atp_config {
            let cfg = AtpConfig::load(path).map_err(|e| e.to_string())?;
            cfg.select(None).cloned()
        } else {
            bundled_backend(timeout)
        };
        if let Some(b) = &mut b {
            if let Some(t) = self.atp_timeout {
                b.timeout = t;
            }
            b.check_executable().map_err(|e| e.to_string())?;
        }
        Ok(b)
    }

    pub fn search_config(&self) -> Result<SearchConfig, String> {
        let table = match &self.schedule {
            Some(p) => PolicyTable::load(p).map_err(|e| e.to_string())?,
            None => PolicyTable::default(),
        };
        Ok(SearchConfig {
            budget: self.budget(),
            overrides: self.overrides(),
            backend: self.backend()?,
            keep_temp: self.keep_temp,
            table,
            ext: self.ext(),
            ..SearchConfig::default()
        })
    }
}

/// The `minifo` binary installed next to the running executable.
pub fn bundled_backend(timeout: f64) -> Option<BackendConfig> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?;
    // test binaries live one level below the executables
    let candidates = [
        dir.join("minifo"),
        dir.parent().map(|d| d.join("minifo")).unwrap_or_default(),
    ];
    let path = candidates.iter().find(|p| Path::new(p).is_file())?;
    BackendConfig::new(
        "minifo",
        path.to_string_lossy(),
        vec!["--timeout".into(), "%t".into(), "%f".into()],
        timeout,
    )
    .ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> CliConfig {
        CliConfig::parse_args(args.iter().map(|s| s.to_string())).unwrap()
    }

    #[test]
    fn single_dash_flags() {
        let c = parse(&["holprove", "-nuc", "-nrleq", "-nraeq", "-ps", "0", "-t", "5", "f.p"]);
        assert!(c.no_choice && c.no_leib_eq && c.no_andr_eq);
        assert_eq!(c.ps, Some(0));
        assert_eq!(c.timeout, 5.0);
        assert_eq!(c.files, [PathBuf::from("f.p")]);
    }

    #[test]
    fn defaults() {
        let c = parse(&["holprove", "f.p"]);
        let o = c.overrides();
        assert_eq!(o.ps, None);
        assert_eq!(o.max_ps(), PrimSubstMode::Quantifiers);
        assert!(!o.no_choice);
        assert_eq!(c.translation, None);
        assert_eq!(TranslationMode::default(), TranslationMode::FofFull);
    }

    #[test]
    fn unknown_flags_are_errors() {
        assert!(CliConfig::parse_args(["holprove", "--frobnicate"].map(String::from)).is_err());
        assert!(CliConfig::parse_args(["holprove", "-ps", "7"].map(String::from)).is_err());
        assert!(CliConfig::parse_args(["holprove", "--translation", "cnf"].map(String::from)).is_err());
    }
}

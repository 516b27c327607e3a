//! External first-order provers: configuration, invocation with a
//! wall-clock limit, and SZS result parsing.

use std::fmt;
use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wait_timeout::ChildExt;

/// Placeholder for the problem file in argument templates.
pub const FILE_PLACEHOLDER: &str = "%f";
/// Placeholder for the per-call timeout in whole seconds.
pub const TIMEOUT_PLACEHOLDER: &str = "%t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SzsStatus {
    Theorem,
    Unsatisfiable,
    CounterSatisfiable,
    Satisfiable,
    Timeout,
    GaveUp,
    Error,
    Unknown,
}

impl SzsStatus {
    pub const ALL: [SzsStatus; 8] = [
        SzsStatus::Theorem,
        SzsStatus::Unsatisfiable,
        SzsStatus::CounterSatisfiable,
        SzsStatus::Satisfiable,
        SzsStatus::Timeout,
        SzsStatus::GaveUp,
        SzsStatus::Error,
        SzsStatus::Unknown,
    ];

    /// Statuses that settle the problem.
    pub fn is_solved(self) -> bool {
        matches!(
            self,
            SzsStatus::Theorem | SzsStatus::Unsatisfiable | SzsStatus::CounterSatisfiable | SzsStatus::Satisfiable
        )
    }

    /// A backend refuted its input.
    pub fn is_refutation(self) -> bool {
        matches!(self, SzsStatus::Theorem | SzsStatus::Unsatisfiable)
    }
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for SzsStatus {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        SzsStatus::ALL.into_iter().find(|x| x.to_string() == s).ok_or(())
    }
}

/// Status from the first well-formed `SZS status <Status>` line of a
/// prover's output, `Unknown` if there is none.
pub fn parse_szs(output: &str) -> SzsStatus {
    output
        .lines()
        .find_map(|line| {
            let rest = &line[line.find("SZS status ")? + "SZS status ".len()..];
            rest.split_whitespace().next()?.parse().ok()
        })
        .unwrap_or(SzsStatus::Unknown)
}

#[derive(Debug, Error)]
pub enum AtpError {
    #[error("backend `{0}`: argument template lacks the {FILE_PLACEHOLDER} placeholder")]
    NoFilePlaceholder(String),
    #[error("backend `{name}`: executable {path} not found")]
    MissingExecutable { name: String, path: String },
    #[error("bad backend spec `{0}` (expected NAME=PATH)")]
    BadSpec(String),
    #[error("cannot read backend config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad backend config: {0}")]
    Toml(#[from] toml::de::Error),
}

fn default_timeout() -> f64 {
    10.0
}

fn enabled() -> bool {
    true
}

/// How to run one backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub name: String,
    /// Executable path, or a helper command for remote provers.
    pub command: String,
    /// Argument template with `%f` (problem file) and `%t` (timeout).
    pub args: Vec<String>,
    /// Per-call timeout in seconds.
    #[serde(default = "default_timeout")]
    pub timeout: f64,
    #[serde(default = "enabled")]
    pub enabled: bool,
}

impl BackendConfig {
    pub fn new(
        name: impl Into<String>,
        command: impl Into<String>,
        args: Vec<String>,
        timeout: f64,
    ) -> Result<BackendConfig, AtpError> {
        let cfg = BackendConfig {
            name: name.into(),
            command: command.into(),
            args,
            timeout,
            enabled: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// A backend in the usual `prover file` shape with a timeout flag.
    pub fn from_spec(spec: &str, timeout: f64) -> Result<BackendConfig, AtpError> {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| AtpError::BadSpec(spec.to_string()))?;
        BackendConfig::new(
            name,
            path,
            vec!["--timeout".into(), TIMEOUT_PLACEHOLDER.into(), FILE_PLACEHOLDER.into()],
            timeout,
        )
    }

    pub fn validate(&self) -> Result<(), AtpError> {
        if !self.args.iter().any(|a| a.contains(FILE_PLACEHOLDER)) {
            return Err(AtpError::NoFilePlaceholder(self.name.clone()));
        }
        Ok(())
    }

    /// Startup check that the executable can be found.
    pub fn check_executable(&self) -> Result<(), AtpError> {
        let p = Path::new(&self.command);
        let found = if p.components().count() > 1 {
            p.is_file()
        } else {
            std::env::var_os("PATH")
                .map(|paths| std::env::split_paths(&paths).any(|d| d.join(p).is_file()))
                .unwrap_or(false)
        };
        if found {
            Ok(())
        } else {
            Err(AtpError::MissingExecutable {
                name: self.name.clone(),
                path: self.command.clone(),
            })
        }
    }

    fn arguments(&self, file: &Path) -> Vec<String> {
        let secs = self.timeout.ceil().max(1.0) as u64;
        self.args
            .iter()
            .map(|a| {
                a.replace(FILE_PLACEHOLDER, &file.to_string_lossy())
                    .replace(TIMEOUT_PLACEHOLDER, &secs.to_string())
            })
            .collect()
    }
}

/// A config file: a list of `[[backend]]` tables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AtpConfig {
    #[serde(default, rename = "backend")]
    pub backends: Vec<BackendConfig>,
}

impl AtpConfig {
    pub fn parse(text: &str) -> Result<AtpConfig, AtpError> {
        let cfg: AtpConfig = toml::from_str(text)?;
        for b in &cfg.backends {
            b.validate()?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<AtpConfig, AtpError> {
        let text = std::fs::read_to_string(path).map_err(|source| AtpError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        AtpConfig::parse(&text)
    }

    /// First enabled backend, or the one with the given name.
    pub fn select(&self, name: Option<&str>) -> Option<&BackendConfig> {
        match name {
            Some(n) => self.backends.iter().find(|b| b.name == n),
            None => self.backends.iter().find(|b| b.enabled),
        }
    }
}

/// What one backend call produced.
#[derive(Clone, Debug)]
pub struct Invocation {
    pub status: SzsStatus,
    pub output: String,
    pub elapsed: Duration,
    /// The problem file, when retained.
    pub kept_file: Option<PathBuf>,
}

/// Runs a backend on `problem_text` and reports its SZS status. Spawn
/// failures give `Error`, expiry of the per-call timeout gives `Timeout`.
pub fn invoke_backend(problem_text: &str, cfg: &BackendConfig) -> (SzsStatus, String) {
    let inv = invoke_backend_with(problem_text, cfg, false);
    (inv.status, inv.output)
}

pub fn invoke_backend_with(problem_text: &str, cfg: &BackendConfig, keep_temp: bool) -> Invocation {
    let start = Instant::now();
    let done = |status, output: String, kept_file| Invocation {
        status,
        output,
        elapsed: start.elapsed(),
        kept_file,
    };
    let file = match tempfile::Builder::new().prefix("holprove-").suffix(".p").tempfile() {
        Ok(mut f) => match f.write_all(problem_text.as_bytes()).and_then(|_| f.flush()) {
            Ok(()) => f.into_temp_path(),
            Err(e) => return done(SzsStatus::Error, format!("cannot write problem file: {e}"), None),
        },
        Err(e) => return done(SzsStatus::Error, format!("cannot create problem file: {e}"), None),
    };
    let (status, output) = run(cfg, &file);
    let kept = if keep_temp { file.keep().ok() } else { None };
    done(status, output, kept)
}

fn run(cfg: &BackendConfig, file: &Path) -> (SzsStatus, String) {
    let mut child = match Command::new(&cfg.command)
        .args(cfg.arguments(file))
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .process_group(0)
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return (SzsStatus::Error, format!("cannot start {}: {e}", cfg.command)),
    };
    // drain both pipes so a chatty backend cannot block on a full pipe
    let drain = |r: Option<Box<dyn Read + Send>>| {
        thread::spawn(move || {
            let mut s = String::new();
            if let Some(mut r) = r {
                let _ = r.read_to_string(&mut s);
            }
            s
        })
    };
    let out = drain(child.stdout.take().map(|r| Box::new(r) as Box<dyn Read + Send>));
    let err = drain(child.stderr.take().map(|r| Box::new(r) as Box<dyn Read + Send>));
    let limit = Duration::from_secs_f64(cfg.timeout.max(0.0));
    let timed_out = match child.wait_timeout(limit) {
        Ok(Some(_)) => false,
        Ok(None) | Err(_) => {
            // the whole group, so helpers spawned by the backend die too
            unsafe {
                libc::kill(-(child.id() as i32), libc::SIGKILL);
            }
            let _ = child.kill();
            let _ = child.wait();
            true
        }
    };
    let mut output = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();
    if !stderr.is_empty() {
        output.push_str(&stderr);
    }
    if timed_out {
        return (SzsStatus::Timeout, output);
    }
    (parse_szs(&output), output)
}

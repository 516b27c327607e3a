//! Interactive mode: a line-oriented command interface over the prover
//! state. Every rule application goes through the same state operations
//! the automatic loop uses.

use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use hol_core::atp::BackendConfig;
use hol_core::calculus::PrimSubstMode;
use hol_core::clause::{Clause, ClauseId};
use hol_core::clausify::ExtOptions;
use hol_core::fol::{print_fof, translate_clauses, TranslationMode};
use hol_core::search::{
    analyze_problem, classify, dispatch, saturate, step, Overrides, ProverState, SearchConfig, StepOutcome, Strategy,
    RULES,
};
use hol_core::tptp::{parse_file, Problem};

pub const HELP: &str = "\
commands:
  load FILE              add the clauses of a problem file
  show state             list active and passive clauses
  show clause ID         print one clause and its origin
  show trace             list rule applications so far
  show derivation ID     print a clause with all its ancestors
  apply RULE ID [ID]     apply one calculus rule to named clauses
  set KEY VALUE          ps 0|1|2, depth N, choice|leib_eq|andr_eq on|off,
                         translation MODE, timeout SECONDS
  translate [MODE]       print the first-order translation of the state
  call-atp               send the translation to the backend
  step [N]               run N iterations of the given-clause loop
  prove                  run the loop from the current state
  rules                  list rule names
  help                   this text
  quit                   leave";

/// One parsed command line.
#[derive(Clone, Debug, PartialEq)]
pub enum ReplCommand {
    Load(String),
    ShowState,
    ShowClause(ClauseId),
    ShowTrace,
    ShowDerivation(ClauseId),
    Apply(String, Vec<ClauseId>),
    Set(String, String),
    Translate(Option<TranslationMode>),
    CallAtp,
    Step(usize),
    Prove,
    Rules,
    Help,
    Quit,
}

fn id(s: &str) -> Result<ClauseId, String> {
    s.parse().map_err(|_| format!("not a clause id: `{s}`"))
}

impl FromStr for ReplCommand {
    type Err = String;

    fn from_str(line: &str) -> Result<ReplCommand, String> {
        let words: Vec<&str> = line.split_whitespace().collect();
        let usage = |u: &str| Err(format!("usage: {u}"));
        Ok(match words.as_slice() {
            ["load", f] => ReplCommand::Load(f.to_string()),
            ["load", ..] => return usage("load FILE"),
            ["show", "state"] => ReplCommand::ShowState,
            ["show", "clause", n] => ReplCommand::ShowClause(id(n)?),
            ["show", "trace"] => ReplCommand::ShowTrace,
            ["show", "derivation", n] => ReplCommand::ShowDerivation(id(n)?),
            ["show", ..] => return usage("show state | show clause ID | show trace | show derivation ID"),
            ["apply", rule, ids @ ..] if !ids.is_empty() => {
                ReplCommand::Apply(rule.to_string(), ids.iter().map(|s| id(s)).collect::<Result<_, _>>()?)
            }
            ["apply", ..] => return usage("apply RULE ID [ID]"),
            ["set", k, v] => ReplCommand::Set(k.to_string(), v.to_string()),
            ["set", ..] => return usage("set KEY VALUE"),
            ["translate"] => ReplCommand::Translate(None),
            ["translate", m] => ReplCommand::Translate(Some(m.parse().map_err(|e| format!("{e}"))?)),
            ["call-atp"] => ReplCommand::CallAtp,
            ["step"] => ReplCommand::Step(1),
            ["step", n] => ReplCommand::Step(n.parse().map_err(|_| format!("not a count: `{n}`"))?),
            ["prove"] => ReplCommand::Prove,
            ["rules"] => ReplCommand::Rules,
            ["help"] => ReplCommand::Help,
            ["quit"] | ["exit"] => ReplCommand::Quit,
            [] => return Err("empty command".into()),
            [w, ..] => return Err(format!("unknown command `{w}`, try `help`")),
        })
    }
}

fn on_off(v: &str) -> Result<bool, String> {
    match v {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(format!("expected on or off, got `{v}`")),
    }
}

/// The interactive session: a prover state plus the settings the rules
/// and the loop read.
pub struct Session {
    pub state: ProverState,
    pub strategy: Strategy,
    /// Everything loaded so far, for problem analysis.
    pub problem: Problem,
    pub backend: Option<BackendConfig>,
    pub keep_temp: bool,
    pub timeout: Duration,
    overrides: Overrides,
}

impl Session {
    pub fn new(ext: ExtOptions, overrides: Overrides, backend: Option<BackendConfig>, timeout: Duration) -> Session {
        let mut strategy = Strategy::interactive();
        overrides.apply(&mut strategy);
        let mut state = ProverState::new(ext);
        state.ps = strategy.ps;
        state.max_weight = Some(strategy.max_weight);
        state.unify.max_depth = strategy.depth;
        Session {
            state,
            strategy,
            problem: Problem::default(),
            backend,
            keep_temp: false,
            timeout,
            overrides,
        }
    }

    pub fn from_config(cfg: &SearchConfig) -> Session {
        let mut s = Session::new(cfg.ext, cfg.overrides.clone(), cfg.backend.clone(), cfg.budget);
        s.keep_temp = cfg.keep_temp;
        s
    }

    fn clause_line(c: &Clause) -> String {
        let mut l = format!("{}: {}  ({}", c.id, c, c.origin.rule);
        if !c.origin.parents.is_empty() {
            let ps: Vec<String> = c.origin.parents.iter().map(|p| p.to_string()).collect();
            l.push(' ');
            l.push_str(&ps.join(","));
        }
        l.push(')');
        l
    }

    fn clause(&self, id: ClauseId) -> Result<&Clause, String> {
        self.state.get(id).ok_or_else(|| format!("no clause with id {id}"))
    }

    fn load(&mut self, path: &Path) -> Result<String, String> {
        let p = parse_file(path).map_err(|e| e.to_string())?;
        let ids = self.state.load(&p);
        self.problem.signature.extend(p.signature);
        for b in p.base_types {
            if !self.problem.base_types.contains(&b) {
                self.problem.base_types.push(b);
            }
        }
        self.problem.formulas.extend(p.formulas);
        if self.strategy.choice {
            for &i in &ids {
                let _ = self.state.apply_rule(hol_core::calculus::rules::DETECT_CHOICE_FN, &[i]);
            }
        }
        let mut out = format!("loaded {} clause(s)", ids.len());
        for i in ids {
            if let Some(c) = self.state.get(i) {
                write!(out, "\n{}", Session::clause_line(c)).unwrap();
            }
        }
        Ok(out)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<String, String> {
        match key {
            "ps" => {
                let level: u8 = value.parse().map_err(|_| format!("not a level: `{value}`"))?;
                let m = PrimSubstMode::from_level(level).ok_or("ps takes 0, 1 or 2")?;
                self.strategy.ps = m;
                self.state.ps = m;
            }
            "depth" => {
                let d: usize = value.parse().map_err(|_| format!("not a depth: `{value}`"))?;
                self.strategy.depth = d;
                self.state.unify.max_depth = d;
            }
            "choice" => self.strategy.choice = on_off(value)?,
            "leib_eq" => self.strategy.leib_eq = on_off(value)?,
            "andr_eq" => self.strategy.andr_eq = on_off(value)?,
            "translation" => self.strategy.translation = value.parse().map_err(|e| format!("{e}"))?,
            "timeout" => {
                let t: f64 = value.parse().map_err(|_| format!("not a number: `{value}`"))?;
                if !(t.is_finite() && t >= 0.0) {
                    return Err("timeout must be a non-negative number".into());
                }
                self.timeout = Duration::from_secs_f64(t);
            }
            _ => return Err(format!("unknown setting `{key}`")),
        }
        Ok(format!("{key} = {value}"))
    }

    /// Runs one command. Errors are reported without touching the state.
    pub fn execute(&mut self, cmd: &ReplCommand) -> Result<String, String> {
        match cmd {
            ReplCommand::Load(f) => self.load(Path::new(f)),
            ReplCommand::ShowState => Ok(self.state.render().trim_end().to_string()),
            ReplCommand::ShowClause(i) => Ok(Session::clause_line(self.clause(*i)?)),
            ReplCommand::ShowTrace => Ok(self
                .state
                .trace
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join("\n")),
            ReplCommand::ShowDerivation(i) => {
                self.clause(*i)?;
                let lines: Vec<String> = self
                    .state
                    .derivation(*i)
                    .into_iter()
                    .map(Session::clause_line)
                    .collect();
                Ok(lines.join("\n"))
            }
            ReplCommand::Apply(rule, ids) => {
                let applied = self.state.apply_rule(rule, ids).map_err(|e| e.to_string())?;
                if applied.is_empty() {
                    return Ok("rule not applicable".into());
                }
                let mut out = Vec::new();
                for i in &applied.new {
                    out.push(format!("new {}", Session::clause_line(&self.state.clauses[i])));
                }
                for i in &applied.removed {
                    out.push(format!("removed {i}"));
                }
                for n in &applied.registered {
                    out.push(format!("registered choice function {n}"));
                }
                Ok(out.join("\n"))
            }
            ReplCommand::Set(k, v) => self.set(k, v),
            ReplCommand::Translate(m) => {
                let mode = m.unwrap_or(self.strategy.translation);
                let cs: Vec<Clause> = self.state.current().into_iter().cloned().collect();
                let fo = translate_clauses(&cs, mode).map_err(|e| e.to_string())?;
                Ok(print_fof(&fo).trim_end().to_string())
            }
            ReplCommand::CallAtp => {
                let b = self.backend.as_ref().ok_or("no backend configured")?;
                let deadline = Instant::now() + self.timeout;
                match dispatch(&mut self.state, &self.strategy, b, deadline, self.keep_temp) {
                    Some(s) => {
                        let note = self.state.trace.last().map(|t| t.note.clone()).unwrap_or_default();
                        Ok(format!("% SZS status {s}\n{note}"))
                    }
                    None => Err("nothing was sent to the backend".into()),
                }
            }
            ReplCommand::Step(n) => {
                let deadline = Instant::now() + self.timeout;
                let mut out = Vec::new();
                for _ in 0..*n {
                    let o = step(&mut self.state, &self.strategy, deadline);
                    out.push(match o {
                        StepOutcome::Given(g) => format!("given {g}"),
                        StepOutcome::Dropped(g) => format!("dropped {g}"),
                        StepOutcome::Refuted(e) => format!("refuted: empty clause {e}"),
                        StepOutcome::Saturated => "saturated".into(),
                        StepOutcome::Expired => "time out".into(),
                    });
                    if !matches!(o, StepOutcome::Given(_) | StepOutcome::Dropped(_)) {
                        break;
                    }
                }
                Ok(out.join("\n"))
            }
            ReplCommand::Prove => {
                let features = analyze_problem(&self.problem);
                let cfg = SearchConfig {
                    budget: self.timeout,
                    overrides: self.overrides.clone(),
                    backend: self.backend.clone(),
                    keep_temp: self.keep_temp,
                    ext: ExtOptions {
                        boolean_ext: self.state.unify.boolean_ext,
                        functional_ext: self.state.unify.functional_ext,
                    },
                    ..SearchConfig::default()
                };
                let deadline = Instant::now() + self.timeout;
                let out = saturate(
                    &mut self.state,
                    &self.strategy,
                    deadline,
                    self.backend.as_ref(),
                    &cfg,
                    features.fragment,
                );
                let status = classify(&out, &self.state, &self.strategy, &features, &self.overrides);
                Ok(format!("% SZS status {status}"))
            }
            ReplCommand::Rules => Ok(RULES
                .iter()
                .map(|(r, n)| format!("{r}/{n}"))
                .collect::<Vec<_>>()
                .join("\n")),
            ReplCommand::Help => Ok(HELP.into()),
            ReplCommand::Quit => Ok(String::new()),
        }
    }

    /// Parses and runs one line. Blank lines and `%` comments do nothing.
    /// Returns `None` on `quit`.
    pub fn line(&mut self, line: &str) -> Option<String> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            return Some(String::new());
        }
        Some(match line.parse::<ReplCommand>() {
            Ok(ReplCommand::Quit) => return None,
            Ok(cmd) => match self.execute(&cmd) {
                Ok(s) => s,
                Err(e) => format!("error: {e}"),
            },
            Err(e) => format!("error: {e}"),
        })
    }
}

/// Reads commands until end of input or `quit`. With `echo`, each command
/// is repeated before its output, which keeps script transcripts readable.
pub fn repl_loop<R: BufRead, W: std::io::Write>(
    session: &mut Session,
    input: R,
    mut out: W,
    echo: bool,
    prompt: bool,
) -> std::io::Result<()> {
    if prompt {
        write!(out, "> ")?;
        out.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        if echo && !line.trim().is_empty() {
            writeln!(out, "> {}", line.trim())?;
        }
        match session.line(&line) {
            None => break,
            Some(s) if !s.is_empty() => writeln!(out, "{s}")?,
            Some(_) => {}
        }
        if prompt {
            write!(out, "> ")?;
            out.flush()?;
        }
    }
    Ok(())
}

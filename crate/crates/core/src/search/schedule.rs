//! Strategies and the schedule policy table.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::features::{Fragment, ProblemFeatures};
use crate::calculus::PrimSubstMode;
use crate::fol::TranslationMode;

/// The policy table shipped with the prover.
pub const DEFAULT_POLICY: &str = include_str!("schedule.toml");

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("bad schedule table: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("cannot read schedule table {0}: {1}")]
    Io(String, std::io::Error),
    #[error("policy `{0}` has no strategies")]
    EmptyPolicy(String),
    #[error("no policy applies (add one with when = \"default\")")]
    NoDefault,
    #[error("strategy `{0}`: share must be in (0, 1]")]
    BadShare(String),
    #[error("strategy `{0}`: ps must be 0, 1 or 2")]
    BadPs(String),
}

fn yes() -> bool {
    true
}
fn two() -> u8 {
    2
}
fn depth() -> usize {
    2
}
fn max_depth() -> usize {
    4
}
fn fifty() -> usize {
    50
}
fn one() -> u32 {
    1
}
fn four() -> u32 {
    4
}
fn max_weight() -> usize {
    80
}

/// One strategy as written in the table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub name: String,
    pub share: f64,
    #[serde(default = "yes")]
    pub choice: bool,
    #[serde(default = "yes")]
    pub leib_eq: bool,
    #[serde(default = "yes")]
    pub andr_eq: bool,
    #[serde(default = "two")]
    pub ps: u8,
    #[serde(default = "depth")]
    pub depth: usize,
    #[serde(default = "max_depth")]
    pub max_depth: usize,
    #[serde(default)]
    pub translation: TranslationMode,
    #[serde(default = "fifty")]
    pub dispatch: usize,
    #[serde(default)]
    pub dispatch_at_start: bool,
    #[serde(default = "one")]
    pub age: u32,
    #[serde(default = "four")]
    pub weight: u32,
    #[serde(default = "max_weight")]
    pub max_weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Policy {
    pub when: String,
    #[serde(rename = "strategy")]
    pub strategies: Vec<StrategySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyTable {
    #[serde(rename = "policy")]
    pub policies: Vec<Policy>,
}

impl PolicyTable {
    pub fn parse(text: &str) -> Result<PolicyTable, ScheduleError> {
        let t: PolicyTable = toml::from_str(text)?;
        if !t.policies.iter().any(|p| p.when == "default") {
            return Err(ScheduleError::NoDefault);
        }
        for p in &t.policies {
            if p.strategies.is_empty() {
                return Err(ScheduleError::EmptyPolicy(p.when.clone()));
            }
            for s in &p.strategies {
                if !(s.share > 0.0 && s.share <= 1.0) {
                    return Err(ScheduleError::BadShare(s.name.clone()));
                }
                if PrimSubstMode::from_level(s.ps).is_none() {
                    return Err(ScheduleError::BadPs(s.name.clone()));
                }
            }
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<PolicyTable, ScheduleError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScheduleError::Io(path.display().to_string(), e))?;
        PolicyTable::parse(&text)
    }

    fn matches(when: &str, f: &ProblemFeatures) -> bool {
        match when {
            "ac" => f.contains_ac_instance,
            "propositional" => f.fragment == Fragment::Propositional,
            "first-order" => f.fragment == Fragment::FirstOrderLike,
            "higher-order" => f.fragment == Fragment::HigherOrder,
            "choice" => f.contains_choice_terms,
            "equality" => f.equality_heavy,
            "default" => true,
            _ => false,
        }
    }

    /// The first policy whose condition holds.
    pub fn policy_for(&self, f: &ProblemFeatures) -> &Policy {
        self.policies
            .iter()
            .find(|p| PolicyTable::matches(&p.when, f))
            .expect("validated table has a default policy")
    }
}

impl Default for PolicyTable {
    fn default() -> Self {
        PolicyTable::parse(DEFAULT_POLICY).expect("bundled schedule table is valid")
    }
}

/// Flags of one strategy slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub name: String,
    pub slice: Duration,
    pub choice: bool,
    pub leib_eq: bool,
    pub andr_eq: bool,
    pub ps: PrimSubstMode,
    /// Initial preunification depth.
    pub depth: usize,
    /// Depth up to which the loop may extend on exhaustion.
    pub max_depth: usize,
    pub translation: TranslationMode,
    /// Backend period in iterations, `None` when the backend is off.
    pub dispatch: Option<usize>,
    pub dispatch_at_start: bool,
    /// Age picks and weight picks per selection cycle.
    pub ratio: (u32, u32),
    pub max_weight: usize,
}

impl Strategy {
    fn from_spec(s: &StrategySpec, slice: Duration) -> Strategy {
        Strategy {
            name: s.name.clone(),
            slice,
            choice: s.choice,
            leib_eq: s.leib_eq,
            andr_eq: s.andr_eq,
            ps: PrimSubstMode::from_level(s.ps).expect("validated"),
            depth: s.depth,
            max_depth: s.max_depth.max(s.depth),
            translation: s.translation,
            dispatch: (s.dispatch > 0).then_some(s.dispatch),
            dispatch_at_start: s.dispatch_at_start,
            ratio: (s.age, s.weight),
            max_weight: s.max_weight,
        }
    }

    /// A single strategy with default flags, for interactive use.
    pub fn interactive() -> Strategy {
        let spec: StrategySpec = toml::from_str("name = \"interactive\"\nshare = 1.0").expect("valid");
        Strategy::from_spec(&spec, Duration::from_secs(60))
    }
}

/// Command-line adjustments applied on top of every scheduled strategy.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    /// `-nuc`
    pub no_choice: bool,
    /// `-nrleq`
    pub no_leib_eq: bool,
    /// `-nraeq`
    pub no_andr_eq: bool,
    /// `-ps N`
    pub ps: Option<PrimSubstMode>,
    pub translation: Option<TranslationMode>,
    pub no_backend: bool,
}

impl Overrides {
    pub fn apply(&self, s: &mut Strategy) {
        s.choice &= !self.no_choice;
        s.leib_eq &= !self.no_leib_eq;
        s.andr_eq &= !self.no_andr_eq;
        if let Some(ps) = self.ps {
            s.ps = ps;
        }
        if let Some(t) = self.translation {
            s.translation = t;
        }
        if self.no_backend {
            s.dispatch = None;
            s.dispatch_at_start = false;
        }
    }

    /// The most permissive primitive substitution mode in effect.
    pub fn max_ps(&self) -> PrimSubstMode {
        self.ps.unwrap_or(PrimSubstMode::Quantifiers)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub policy: String,
    pub budget: Duration,
    pub strategies: Vec<Strategy>,
}

impl Schedule {
    pub fn total(&self) -> Duration {
        self.strategies.iter().map(|s| s.slice).sum()
    }
}

/// Picks the strategies for a problem. Slices are the table's shares of
/// the budget, scaled down if the shares add up to more than one.
pub fn select_schedule(f: &ProblemFeatures, budget: Duration, table: &PolicyTable) -> Schedule {
    let policy = table.policy_for(f);
    let total: f64 = policy.strategies.iter().map(|s| s.share).sum();
    let scale = if total > 1.0 { 1.0 / total } else { 1.0 };
    let strategies = policy
        .strategies
        .iter()
        .map(|s| {
            let slice = Duration::from_secs_f64(budget.as_secs_f64() * s.share * scale * 0.999_999);
            Strategy::from_spec(s, slice)
        })
        .collect();
    Schedule {
        policy: policy.when.clone(),
        budget,
        strategies,
    }
}

//! Translation of higher-order clauses into first-order TPTP and a small
//! resolution prover for the result.
//!
//! The pipeline is λ-lifting ([`lambda_lift`]), applicative encoding with
//! type information ([`to_intermediate`]), optional guard erasure for
//! monotone sorts ([`monotone_sorts`], decided with [`sat_solve`]) and
//! printing ([`print_fof`]). [`prove`] is the bundled backend.

mod cnf;
mod encode;
mod lift;
mod mono;
mod prover;
mod sat;
mod syntax;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use cnf::{cnf, FoAtom, FoClause, FoLit};
pub use encode::to_intermediate;
pub use lift::{lambda_lift, lift_formula, Lifter, LIFT_PREFIX};
pub use mono::{is_monotone, monotone_sorts};
pub use prover::{from_hol, mgu, prove, prove_problem, FoResult, ProverLimits, Subst};
pub use sat::{sat_solve, SatInstance, SatResult};
pub use syntax::{print_fof, sort_of, FoAnnotated, FoFormula, FoProblem, FoRole, FoTerm, FoVar, Sort};

use crate::clause::Clause;

/// Binary application symbol of the applicative encoding.
pub const APPLY: &str = "at";
/// Predicate reading a reified formula as a truth value.
pub const PTRUE: &str = "pTrue";
/// Type-tag wrapper of the fully typed encoding.
pub const TAG_FN: &str = "ti";
pub const TAG_PREFIX: &str = "t_";
/// Prefix of guard predicates.
pub const GUARD_PREFIX: &str = "is_";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("atom is not λ-free: {0}")]
    NotLambdaFree(String),
    #[error("atom has a loose bound variable: {0}")]
    LooseBound(String),
    #[error("not a formula: {0}")]
    NotFormula(String),
    #[error("not first-order: {0}")]
    NotFirstOrder(String),
    #[error("unknown translation mode `{0}` (expected fully-typed, fof_full or fof_experiment)")]
    UnknownMode(String),
}

/// How type information is kept in first-order output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(try_from = "String", into = "String")]
pub enum TranslationMode {
    /// Every term is wrapped with a tag naming its type.
    FullyTyped,
    /// Quantified variables are guarded by type predicates.
    #[default]
    FofFull,
    /// As `FofFull`, without guards for sorts shown monotone.
    FofExperiment,
}

impl FromStr for TranslationMode {
    type Err = FolError;

    fn from_str(s: &str) -> Result<Self, FolError> {
        match s {
            "fully-typed" | "fully_typed" => Ok(TranslationMode::FullyTyped),
            "fof_full" | "fof-full" => Ok(TranslationMode::FofFull),
            "fof_experiment" | "fof-experiment" => Ok(TranslationMode::FofExperiment),
            _ => Err(FolError::UnknownMode(s.to_string())),
        }
    }
}

impl TryFrom<String> for TranslationMode {
    type Error = FolError;

    fn try_from(s: String) -> Result<Self, FolError> {
        s.parse()
    }
}

impl From<TranslationMode> for String {
    fn from(m: TranslationMode) -> String {
        m.to_string()
    }
}

impl fmt::Display for TranslationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TranslationMode::FullyTyped => "fully-typed",
            TranslationMode::FofFull => "fof_full",
            TranslationMode::FofExperiment => "fof_experiment",
        })
    }
}

/// λ-lifts and encodes a clause set. Definitions of lifted symbols come
/// first, followed by the clauses in order.
pub fn translate_clauses(clauses: &[Clause], mode: TranslationMode) -> Result<FoProblem, FolError> {
    let mut lifter = Lifter::new();
    let mut used = std::collections::BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            l.atom.constants(&mut used);
        }
    }
    lifter.avoid(used.iter().map(|(n, _)| n.as_ref()));
    let mut defs = Vec::new();
    let mut body = Vec::new();
    for c in clauses {
        let (lifted, d) = lift_formula(&c.to_formula(), &mut lifter);
        defs.extend(d);
        body.push((format!("c{}", c.id), FoRole::Axiom, lifted));
    }
    let mut all: Vec<(String, FoRole, crate::term::Term)> = Vec::new();
    for (i, d) in defs.iter().enumerate() {
        all.push((format!("lift_def{i}"), FoRole::Axiom, d.to_formula()));
    }
    all.extend(body);
    to_intermediate(&all, mode)
}

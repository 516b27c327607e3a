//! TPTP front-end. Every input language is embedded into one term language.
//!
//! FOF and CNF symbols receive inferred types (`$i^n > $o` for predicates,
//! `$i^n > $i` for functions). CNF clauses are universally closed. THF0
//! constants must be declared before use.

mod elaborate;
mod lexer;
mod parser;
mod print;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::term::{Name, Term, Type};

pub use print::{fof_formula_string, print_problem, print_tptp};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("cannot resolve include `{0}`")]
    UnknownInclude(String),
    #[error("include cycle through `{0}`")]
    IncludeCycle(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("type error in `{formula}` at {line}:{col}: {msg}")]
    Type {
        formula: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{file}: {inner}")]
    InFile {
        file: String,
        #[source]
        inner: Box<ParseError>,
    },
}

impl ParseError {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Thf,
    Fof,
    Cnf,
}

impl Language {
    pub fn keyword(self) -> &'static str {
        match self {
            Language::Thf => "thf",
            Language::Fof => "fof",
            Language::Cnf => "cnf",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    Definition,
    Lemma,
    Theorem,
    Conjecture,
    NegatedConjecture,
    Other(String),
}

impl Role {
    pub fn parse(s: &str) -> Role {
        match s {
            "axiom" => Role::Axiom,
            "hypothesis" => Role::Hypothesis,
            "definition" => Role::Definition,
            "lemma" => Role::Lemma,
            "theorem" => Role::Theorem,
            "conjecture" => Role::Conjecture,
            "negated_conjecture" => Role::NegatedConjecture,
            other => Role::Other(other.to_string()),
        }
    }

    pub fn is_conjecture(&self) -> bool {
        matches!(self, Role::Conjecture)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Definition => "definition",
            Role::Lemma => "lemma",
            Role::Theorem => "theorem",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
            Role::Other(s) => s,
        };
        f.write_str(s)
    }
}

/// A named, closed formula with its role and source language.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedFormula {
    pub name: String,
    pub role: Role,
    pub formula: Term,
    pub language: Language,
}

#[derive(Clone, Debug, Default)]
pub struct Problem {
    /// Non-logical constants and their types.
    pub signature: BTreeMap<Name, Type>,
    /// User base types declared with `$tType`, in declaration order.
    pub base_types: Vec<Name>,
    pub formulas: Vec<AnnotatedFormula>,
}

impl Problem {
    pub fn conjectures(&self) -> impl Iterator<Item = &AnnotatedFormula> {
        self.formulas.iter().filter(|f| f.role.is_conjecture())
    }

    pub fn has_conjecture(&self) -> bool {
        self.conjectures().next().is_some()
    }
}

/// Names the prover mints for itself. Input using them is rejected.
pub fn is_reserved_name(name: &str) -> bool {
    let digits_after = |p: &str| {
        name.strip_prefix(p)
            .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
    };
    digits_after("sk") || digits_after("leoLift")
}

/// Parses a problem. Includes are looked up relative to `base_dir`, then
/// relative to the directory named by the `TPTP` environment variable.
pub fn parse_problem(text: &str, base_dir: &Path) -> Result<Problem, ParseError> {
    let mut el = elaborate::Elaborator::new(base_dir.to_path_buf());
    el.run(text, None)?;
    Ok(el.finish())
}

pub fn parse_file(path: &Path) -> Result<Problem, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_problem(&text, &base)
}

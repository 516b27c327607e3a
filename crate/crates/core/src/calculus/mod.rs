//! Inference rules. Every rule is a function from premises to a
//! [`RuleResult`]; conclusions are normalized by the lazy clausification
//! rules and carry their rule name and parent ids.

mod choice;
mod equality;
mod primsubst;
mod resolution;
mod subsumption;

use std::collections::{BTreeMap, BTreeSet};

pub use choice::{apply_choice, choice_candidates, detect_choice_fn, is_choice_axiom_shape};
pub use equality::{andr_eq, leib_eq};
pub use primsubst::{prim_subst, PrimSubstMode};
pub use resolution::{eq_resolve, factorise, resolve};
pub use subsumption::{match_terms, subsumes};

use crate::clause::{Clause, ClauseId, Literal, Origin};
use crate::clausify::{normalize_clause, ExtOptions, Namer};
use crate::term::{beta_normalize, Name, Term, Type};
use crate::unify::UnifyOptions;

/// Rule names as they appear in traces and in the REPL.
pub mod rules {
    pub const RESOLVE: &str = "resolve";
    pub const FACTORISE: &str = "factorise";
    pub const EQ_RESOLVE: &str = "eq_resolve";
    pub const DETECT_CHOICE_FN: &str = "detect_choice_fn";
    pub const CHOICE: &str = "choice";
    pub const LEIB_EQ: &str = "leib_eq";
    pub const ANDR_EQ: &str = "andr_eq";
    pub const PRIM_SUBST: &str = "prim_subst";
}

/// Choice functions known to the prover, keyed by element type, plus the
/// instances the choice rule has already produced.
#[derive(Clone, Debug, Default)]
pub struct ChoiceRegister {
    functions: BTreeMap<Type, Vec<Name>>,
    emitted: BTreeSet<(Name, String)>,
}

impl ChoiceRegister {
    pub fn new() -> ChoiceRegister {
        ChoiceRegister::default()
    }

    /// Registers a symbol of type `(α→o)→α`. Returns false if known.
    pub fn register(&mut self, name: Name, ty: &Type) -> bool {
        let elem = ty.choice_elem().expect("choice type").clone();
        let v = self.functions.entry(elem).or_default();
        if v.contains(&name) {
            false
        } else {
            v.push(name);
            true
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.functions.values().any(|v| v.iter().any(|n| n.as_ref() == name))
    }

    pub fn len(&self) -> usize {
        self.functions.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Name, Type)> + '_ {
        self.functions
            .iter()
            .flat_map(|(a, v)| v.iter().map(move |n| (n.clone(), Type::choice(a.clone()))))
    }

    /// The registered choice function for `α`, minting a default one on
    /// first demand. The second component is true when a symbol was minted.
    pub fn function_for(&mut self, alpha: &Type, namer: &mut Namer) -> (Term, bool) {
        let ty = Type::choice(alpha.clone());
        if let Some(n) = self.functions.get(alpha).and_then(|v| v.first()) {
            return (Term::constant(n.clone(), ty), false);
        }
        let c = namer.skolem_const(ty.clone());
        let (n, _) = c.as_const().expect("constant");
        self.register(n.clone(), &ty);
        (c, true)
    }

    fn mark_emitted(&mut self, eps: &Name, key: String) -> bool {
        self.emitted.insert((eps.clone(), key))
    }
}

#[derive(Clone, Debug, Default)]
pub struct RuleResult {
    pub new_clauses: Vec<Clause>,
    pub removed: Vec<ClauseId>,
    pub registered: Vec<(Name, Type)>,
}

impl RuleResult {
    pub fn is_empty(&self) -> bool {
        self.new_clauses.is_empty() && self.removed.is_empty() && self.registered.is_empty()
    }

    pub fn extend(&mut self, other: RuleResult) {
        self.new_clauses.extend(other.new_clauses);
        self.removed.extend(other.removed);
        self.registered.extend(other.registered);
    }
}

/// Shared context for rule applications.
pub struct RuleCtx<'a> {
    pub unify: UnifyOptions,
    pub namer: &'a mut Namer,
    /// Set when some unification problem was cut by the depth bound.
    pub exhausted: bool,
}

impl<'a> RuleCtx<'a> {
    pub fn new(unify: UnifyOptions, namer: &'a mut Namer) -> RuleCtx<'a> {
        RuleCtx {
            unify,
            namer,
            exhausted: false,
        }
    }

    pub fn ext(&self) -> ExtOptions {
        ExtOptions {
            boolean_ext: self.unify.boolean_ext,
            functional_ext: self.unify.functional_ext,
        }
    }

    /// Builds and normalizes a conclusion. Constraints that stopped being
    /// flex-flex under instantiation turn back into negative equations.
    fn conclude(&mut self, mut lits: Vec<Literal>, cons: Vec<(Term, Term)>, origin: Origin) -> Vec<Clause> {
        let ext = self.ext();
        let mut kept = Vec::new();
        for (s, t) in cons {
            let (s, t) = (beta_normalize(&s), beta_normalize(&t));
            if s.is_flex() && t.is_flex() {
                kept.push((s, t));
            } else {
                lits.push(Literal::neg(Term::eq(s, t)));
            }
        }
        let cons = kept;
        match Clause::new(lits, cons, origin) {
            Some(c) => normalize_clause(c, ext, self.namer),
            None => Vec::new(),
        }
    }
}

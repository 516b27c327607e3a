use std::collections::BTreeMap;
use std::fmt;

use super::{beta_normalize, Name, Node, Term, TermError, Type, Var};

/// Simultaneous substitution of closed-under-binders terms for free
/// variables. Bindings never contain loose bound indices, so application
/// under binders needs no shifting and cannot capture.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: BTreeMap<Name, (Type, Term)>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn single(var: &Var, t: Term) -> Result<Substitution, TermError> {
        let mut s = Substitution::new();
        s.insert(var, t)?;
        Ok(s)
    }

    /// Adds a binding after checking types agree.
    pub fn insert(&mut self, var: &Var, t: Term) -> Result<(), TermError> {
        let found = t.ty();
        if found != var.ty {
            return Err(TermError::SubstTypeMismatch {
                var: var.name.clone(),
                expected: var.ty.clone(),
                found,
            });
        }
        debug_assert!(!t.has_loose_bvars());
        self.bindings.insert(var.name.clone(), (var.ty.clone(), t));
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.get(name).map(|(_, t)| t)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.bindings
            .iter()
            .map(|(n, (ty, t))| (Var::new(n.clone(), ty.clone()), t))
    }

    /// Applies the substitution without normalizing.
    pub fn apply_raw(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        match t.node() {
            Node::Free(n, ty) => match self.bindings.get(n) {
                Some((bty, b)) if bty == ty => b.clone(),
                _ => t.clone(),
            },
            Node::Abs(d, b) => Term::abs(d.clone(), self.apply_raw(b)),
            Node::App(f, a) => Term::app(self.apply_raw(f), self.apply_raw(a)),
            _ => t.clone(),
        }
    }

    /// Capture-avoiding simultaneous substitution followed by βη-normalization.
    pub fn apply(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        beta_normalize(&self.apply_raw(t))
    }

    /// `self` then `other`: `(t σ) τ`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (n, (ty, t)) in &self.bindings {
            out.bindings.insert(n.clone(), (ty.clone(), other.apply(t)));
        }
        for (n, b) in &other.bindings {
            out.bindings.entry(n.clone()).or_insert_with(|| b.clone());
        }
        out
    }

    /// Keeps only bindings for the given variables.
    pub fn restrict(&self, vars: &[Var]) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            if let Some((ty, t)) = self.bindings.get(&v.name) {
                if ty == &v.ty {
                    out.bindings.insert(v.name.clone(), (ty.clone(), t.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, (_, t))) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n} ↦ {t}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

//! Polarity-annotated clauses with residual flex-flex constraints.

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{beta_normalize, logic, Name, Term, Type, Var};

pub type ClauseId = u64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Term,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: Term, positive: bool) -> Literal {
        Literal { atom, positive }
    }

    pub fn pos(atom: Term) -> Literal {
        Literal::new(atom, true)
    }

    pub fn neg(atom: Term) -> Literal {
        Literal::new(atom, false)
    }

    /// Equation sides if the atom is a primitive equation.
    pub fn as_eq(&self) -> Option<(&Term, &Term)> {
        self.atom.as_eq()
    }

    pub fn is_flex(&self) -> bool {
        self.atom.is_flex()
    }

    fn trivial(&self) -> Triviality {
        let a = &self.atom;
        if a.is_const_named(logic::TRUE) {
            return if self.positive {
                Triviality::True
            } else {
                Triviality::False
            };
        }
        if a.is_const_named(logic::FALSE) {
            return if self.positive {
                Triviality::False
            } else {
                Triviality::True
            };
        }
        if let Some((l, r)) = a.as_eq() {
            if l == r {
                return if self.positive {
                    Triviality::True
                } else {
                    Triviality::False
                };
            }
        }
        Triviality::Neither
    }
}

enum Triviality {
    True,
    False,
    Neither,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]^{}", self.atom, if self.positive { "tt" } else { "ff" })
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// How a clause was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Origin {
    pub rule: String,
    pub parents: Vec<ClauseId>,
    /// Some ancestor is the negated conjecture.
    pub from_conjecture: bool,
    /// Substitution or other detail, for proof output.
    pub note: String,
}

impl Origin {
    pub fn new(rule: &str, parents: &[&Clause]) -> Origin {
        Origin {
            rule: rule.to_string(),
            parents: parents.iter().map(|c| c.id).collect(),
            from_conjecture: parents.iter().any(|c| c.origin.from_conjecture),
            note: String::new(),
        }
    }

    pub fn input(name: &str, conjecture: bool) -> Origin {
        Origin {
            rule: "input".into(),
            parents: Vec::new(),
            from_conjecture: conjecture,
            note: name.to_string(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Origin {
        self.note = note.into();
        self
    }
}

/// A disjunction of literals and of negated flex-flex equations. Free
/// variables are implicitly universal. Variables are canonically named
/// `X0, X1, ...` in order of first occurrence.
#[derive(Clone)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
    /// Residual flex-flex unification constraints `s ≠ t`.
    pub constraints: Vec<(Term, Term)>,
    pub origin: Origin,
}

impl Clause {
    /// Builds a clause, normalizing atoms and deleting trivial literals.
    /// Returns `None` for tautologies.
    pub fn new(literals: Vec<Literal>, constraints: Vec<(Term, Term)>, origin: Origin) -> Option<Clause> {
        let mut lits: Vec<Literal> = Vec::with_capacity(literals.len());
        for l in literals {
            let l = Literal::new(beta_normalize(&l.atom), l.positive);
            match l.trivial() {
                Triviality::True => return None,
                Triviality::False => continue,
                Triviality::Neither => {}
            }
            if lits.iter().any(|m| m.atom == l.atom && m.positive != l.positive) {
                return None;
            }
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        let mut cs: Vec<(Term, Term)> = Vec::new();
        for (s, t) in constraints {
            let (s, t) = (beta_normalize(&s), beta_normalize(&t));
            if s != t && !cs.contains(&(s.clone(), t.clone())) && !cs.contains(&(t.clone(), s.clone())) {
                cs.push((s, t));
            }
        }
        let mut c = Clause {
            id: 0,
            literals: lits,
            constraints: cs,
            origin,
        };
        c.canonicalize();
        Some(c)
    }

    /// No literals left. Remaining flex-flex constraints are always
    /// solvable, so such a clause is a refutation.
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Symbol count, used for weight-based selection.
    pub fn weight(&self) -> usize {
        self.literals.iter().map(|l| l.atom.size()).sum::<usize>()
            + self.constraints.iter().map(|(s, t)| s.size() + t.size()).sum::<usize>()
    }

    /// Typed free variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for l in &self.literals {
            l.atom.free_var_list(&mut out);
        }
        for (s, t) in &self.constraints {
            s.free_var_list(&mut out);
            t.free_var_list(&mut out);
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground()) && self.constraints.is_empty()
    }

    /// Renames variables with `f`, keeping types.
    pub fn rename(&self, map: &BTreeMap<Name, Name>) -> Clause {
        let f = |n: &Name, _: &Type| map.get(n).cloned();
        Clause {
            id: self.id,
            literals: self
                .literals
                .iter()
                .map(|l| Literal::new(l.atom.rename_free(&f), l.positive))
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|(s, t)| (s.rename_free(&f), t.rename_free(&f)))
                .collect(),
            origin: self.origin.clone(),
        }
    }

    /// Renames all variables to `{prefix}0, {prefix}1, ...`.
    pub fn renamed_with_prefix(&self, prefix: &str) -> Clause {
        let map: BTreeMap<Name, Name> = self
            .vars()
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v.name, Name::from(format!("{prefix}{i}"))))
            .collect();
        self.rename(&map)
    }

    fn canonicalize(&mut self) {
        let renamed = self.renamed_with_prefix("X");
        self.literals = renamed.literals;
        self.constraints = renamed.constraints;
    }

    /// A key equal for clauses that are identical up to variable renaming
    /// and literal order (approximate: literal order is fixed first by a
    /// variable-blind rendering).
    pub fn variant_key(&self) -> String {
        let blind = |t: &Term| t.rename_free(&|_, _| Some(Name::from("_"))).to_string();
        let mut idx: Vec<usize> = (0..self.literals.len()).collect();
        idx.sort_by_key(|&i| (self.literals[i].positive, blind(&self.literals[i].atom)));
        let mut c = self.clone();
        c.literals = idx.iter().map(|&i| self.literals[i].clone()).collect();
        c.canonicalize();
        let mut s = String::new();
        for l in &c.literals {
            s.push_str(&l.to_string());
            s.push(';');
        }
        for (a, b) in &c.constraints {
            s.push_str(&format!("{a}≠{b};"));
        }
        s
    }

    /// The clause as a closed formula (for the model oracle and printing).
    pub fn to_formula(&self) -> Term {
        let mut disj: Vec<Term> = self
            .literals
            .iter()
            .map(|l| {
                if l.positive {
                    l.atom.clone()
                } else {
                    Term::not(l.atom.clone())
                }
            })
            .collect();
        disj.extend(
            self.constraints
                .iter()
                .map(|(s, t)| Term::not(Term::eq(s.clone(), t.clone()))),
        );
        let body = disj.into_iter().reduce(Term::or).unwrap_or_else(Term::bot);
        self.vars().iter().rev().fold(body, |acc, v| Term::forall(v, &acc))
    }
}

impl PartialEq for Clause {
    /// Content equality; ids and origins are ignored.
    fn eq(&self, other: &Clause) -> bool {
        self.literals == other.literals && self.constraints == other.constraints
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() && self.constraints.is_empty() {
            return write!(f, "□");
        }
        let mut first = true;
        for l in &self.literals {
            if !first {
                write!(f, " ∨ ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        for (s, t) in &self.constraints {
            if !first {
                write!(f, " ∨ ")?;
            }
            first = false;
            write!(f, "[{s} ≟ {t}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {} ({})", self.id, self, self.origin.rule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Type {
        Type::Iota
    }

    fn p() -> Term {
        Term::constant("p", Type::predicate(i()))
    }

    #[test]
    fn canonical_variable_names() {
        let a = Term::app(p(), Term::free("Foo", i()));
        let b = Term::app(p(), Term::free("Bar", i()));
        let c = Clause::new(vec![Literal::pos(a), Literal::neg(b)], vec![], Origin::default()).unwrap();
        assert_eq!(c.to_string(), "[(p @ X0)]^tt ∨ [(p @ X1)]^ff");
    }

    #[test]
    fn trivial_literals_removed() {
        let a = Term::constant("a", i());
        let lits = vec![
            Literal::neg(Term::eq(a.clone(), a.clone())),
            Literal::pos(Term::bot()),
            Literal::pos(Term::app(p(), a.clone())),
        ];
        let c = Clause::new(lits, vec![], Origin::default()).unwrap();
        assert_eq!(c.literals.len(), 1);
        assert!(Clause::new(
            vec![Literal::pos(Term::eq(a.clone(), a.clone()))],
            vec![],
            Origin::default()
        )
        .is_none());
        let pa = Term::app(p(), a);
        assert!(Clause::new(
            vec![Literal::pos(pa.clone()), Literal::neg(pa)],
            vec![],
            Origin::default()
        )
        .is_none());
    }

    #[test]
    fn variant_key_ignores_order_and_names() {
        let q = Term::constant("q", Type::predicate(i()));
        let c1 = Clause::new(
            vec![
                Literal::pos(Term::app(p(), Term::free("A", i()))),
                Literal::neg(Term::app(q.clone(), Term::free("B", i()))),
            ],
            vec![],
            Origin::default(),
        )
        .unwrap();
        let c2 = Clause::new(
            vec![
                Literal::neg(Term::app(q, Term::free("U", i()))),
                Literal::pos(Term::app(p(), Term::free("V", i()))),
            ],
            vec![],
            Origin::default(),
        )
        .unwrap();
        assert_eq!(c1.variant_key(), c2.variant_key());
    }
}

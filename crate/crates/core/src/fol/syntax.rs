use std::collections::BTreeSet;
use std::fmt;

use crate::term::print::atom_name;
use crate::term::{Name, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoTerm {
    Var(Name),
    Fn(Name, Vec<FoTerm>),
}

impl FoTerm {
    pub fn var(n: impl Into<Name>) -> FoTerm {
        FoTerm::Var(n.into())
    }

    pub fn constant(n: impl Into<Name>) -> FoTerm {
        FoTerm::Fn(n.into(), Vec::new())
    }

    pub fn app(f: impl Into<Name>, args: Vec<FoTerm>) -> FoTerm {
        FoTerm::Fn(f.into(), args)
    }

    pub fn size(&self) -> usize {
        match self {
            FoTerm::Var(_) => 1,
            FoTerm::Fn(_, a) => 1 + a.iter().map(FoTerm::size).sum::<usize>(),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            FoTerm::Var(v) => {
                out.insert(v.clone());
            }
            FoTerm::Fn(_, a) => a.iter().for_each(|t| t.vars(out)),
        }
    }

    pub fn has_var(&self, v: &str) -> bool {
        match self {
            FoTerm::Var(w) => w.as_ref() == v,
            FoTerm::Fn(_, a) => a.iter().any(|t| t.has_var(v)),
        }
    }

    /// Function symbols with their arities.
    pub fn symbols(&self, out: &mut BTreeSet<(Name, usize)>) {
        if let FoTerm::Fn(f, a) = self {
            out.insert((f.clone(), a.len()));
            a.iter().for_each(|t| t.symbols(out));
        }
    }
}

/// A bound variable with the sort it ranges over in the many-sorted view.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FoVar {
    pub name: Name,
    pub sort: Option<Sort>,
}

impl FoVar {
    pub fn new(name: impl Into<Name>, sort: Option<Sort>) -> FoVar {
        FoVar {
            name: name.into(),
            sort,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoFormula {
    True,
    False,
    Pred(Name, Vec<FoTerm>),
    Eq(FoTerm, FoTerm),
    Not(Box<FoFormula>),
    And(Vec<FoFormula>),
    Or(Vec<FoFormula>),
    Implies(Box<FoFormula>, Box<FoFormula>),
    Iff(Box<FoFormula>, Box<FoFormula>),
    Forall(Vec<FoVar>, Box<FoFormula>),
    Exists(Vec<FoVar>, Box<FoFormula>),
}

impl FoFormula {
    pub fn pred(p: impl Into<Name>, args: Vec<FoTerm>) -> FoFormula {
        FoFormula::Pred(p.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FoFormula) -> FoFormula {
        FoFormula::Not(Box::new(f))
    }

    pub fn implies(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: FoFormula, b: FoFormula) -> FoFormula {
        FoFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<FoVar>, body: FoFormula) -> FoFormula {
        if vars.is_empty() {
            body
        } else {
            FoFormula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<FoVar>, body: FoFormula) -> FoFormula {
        if vars.is_empty() {
            body
        } else {
            FoFormula::Exists(vars, Box::new(body))
        }
    }

    /// Conjunction, flattening the trivial cases.
    pub fn and(mut fs: Vec<FoFormula>) -> FoFormula {
        match fs.len() {
            0 => FoFormula::True,
            1 => fs.pop().expect("one"),
            _ => FoFormula::And(fs),
        }
    }

    pub fn or(mut fs: Vec<FoFormula>) -> FoFormula {
        match fs.len() {
            0 => FoFormula::False,
            1 => fs.pop().expect("one"),
            _ => FoFormula::Or(fs),
        }
    }

    /// Number of guard atoms (predicates named `is_*`).
    pub fn count_preds_with_prefix(&self, prefix: &str) -> usize {
        match self {
            FoFormula::Pred(p, _) => usize::from(p.starts_with(prefix)),
            FoFormula::True | FoFormula::False | FoFormula::Eq(..) => 0,
            FoFormula::Not(a) => a.count_preds_with_prefix(prefix),
            FoFormula::And(v) | FoFormula::Or(v) => v.iter().map(|f| f.count_preds_with_prefix(prefix)).sum(),
            FoFormula::Implies(a, b) | FoFormula::Iff(a, b) => {
                a.count_preds_with_prefix(prefix) + b.count_preds_with_prefix(prefix)
            }
            FoFormula::Forall(_, b) | FoFormula::Exists(_, b) => b.count_preds_with_prefix(prefix),
        }
    }

    /// Function and predicate symbols with arities (`=` excluded).
    pub fn symbols(&self, funs: &mut BTreeSet<(Name, usize)>, preds: &mut BTreeSet<(Name, usize)>) {
        match self {
            FoFormula::True | FoFormula::False => {}
            FoFormula::Pred(p, a) => {
                preds.insert((p.clone(), a.len()));
                a.iter().for_each(|t| t.symbols(funs));
            }
            FoFormula::Eq(a, b) => {
                a.symbols(funs);
                b.symbols(funs);
            }
            FoFormula::Not(a) => a.symbols(funs, preds),
            FoFormula::And(v) | FoFormula::Or(v) => v.iter().for_each(|f| f.symbols(funs, preds)),
            FoFormula::Implies(a, b) | FoFormula::Iff(a, b) => {
                a.symbols(funs, preds);
                b.symbols(funs, preds);
            }
            FoFormula::Forall(_, b) | FoFormula::Exists(_, b) => b.symbols(funs, preds),
        }
    }
}

/// Sort of the many-sorted intermediate language: the mangled name of a
/// simple type. The mangling is injective and yields identifier characters.
pub type Sort = Name;

pub fn sort_of(ty: &Type) -> Sort {
    fn go(ty: &Type, out: &mut String) {
        match ty {
            Type::Iota => out.push('i'),
            Type::O => out.push('o'),
            Type::Base(n) => {
                let clean: String = n.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '_').collect();
                out.push_str(&format!("b{}{}", clean.len(), clean));
            }
            Type::Fun(a, b) => {
                out.push('F');
                go(a, out);
                out.push('_');
                go(b, out);
                out.push('E');
            }
        }
    }
    let mut s = String::new();
    go(ty, &mut s);
    Name::from(s)
}

/// Roles surviving translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoRole {
    Axiom,
    Conjecture,
}

impl fmt::Display for FoRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoRole::Axiom => "axiom",
            FoRole::Conjecture => "conjecture",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoAnnotated {
    pub name: String,
    pub role: FoRole,
    pub formula: FoFormula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoProblem {
    pub formulas: Vec<FoAnnotated>,
}

impl FoProblem {
    pub fn push(&mut self, name: impl Into<String>, role: FoRole, formula: FoFormula) {
        self.formulas.push(FoAnnotated {
            name: name.into(),
            role,
            formula,
        });
    }

    pub fn guard_count(&self) -> usize {
        self.formulas
            .iter()
            .map(|f| f.formula.count_preds_with_prefix(super::GUARD_PREFIX))
            .sum()
    }
}

// ---- printing ----

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoTerm::Var(v) => f.write_str(v),
            FoTerm::Fn(n, a) => {
                f.write_str(&atom_name(n))?;
                if !a.is_empty() {
                    f.write_str("(")?;
                    for (i, t) in a.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[FoFormula], op: &str| -> fmt::Result {
            f.write_str("(")?;
            for (i, g) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{g}")?;
            }
            f.write_str(")")
        };
        let binder = |f: &mut fmt::Formatter<'_>, q: &str, vs: &[FoVar], b: &FoFormula| -> fmt::Result {
            write!(f, "({q}[")?;
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&v.name)?;
            }
            write!(f, "]: {b})")
        };
        match self {
            FoFormula::True => f.write_str("$true"),
            FoFormula::False => f.write_str("$false"),
            FoFormula::Pred(p, a) => write!(f, "{}", FoTerm::Fn(p.clone(), a.clone())),
            FoFormula::Eq(a, b) => write!(f, "({a} = {b})"),
            FoFormula::Not(a) => write!(f, "~ {a}"),
            FoFormula::And(v) => join(f, v, "&"),
            FoFormula::Or(v) => join(f, v, "|"),
            FoFormula::Implies(a, b) => write!(f, "({a} => {b})"),
            FoFormula::Iff(a, b) => write!(f, "({a} <=> {b})"),
            FoFormula::Forall(vs, b) => binder(f, "!", vs, b),
            FoFormula::Exists(vs, b) => binder(f, "?", vs, b),
        }
    }
}

/// TPTP FOF text, one annotated formula per line, in problem order.
pub fn print_fof(p: &FoProblem) -> String {
    let mut out = String::new();
    for a in &p.formulas {
        out.push_str(&format!("fof({}, {}, {}).\n", atom_name(&a.name), a.role, a.formula));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_mangling_is_injective_on_samples() {
        let tys = [
            Type::Iota,
            Type::O,
            Type::predicate(Type::Iota),
            Type::fun(Type::predicate(Type::Iota), Type::Iota),
            Type::curried([Type::Iota, Type::Iota], Type::O),
            Type::fun(Type::fun(Type::Iota, Type::Iota), Type::O),
            Type::Base("nat".into()),
            Type::Base("na".into()),
        ];
        let sorts: BTreeSet<Sort> = tys.iter().map(sort_of).collect();
        assert_eq!(sorts.len(), tys.len());
        assert_eq!(sort_of(&Type::predicate(Type::Iota)).as_ref(), "Fi_oE");
    }

    #[test]
    fn prints_fof_syntax() {
        let x = FoVar::new("X", None);
        let f = FoFormula::forall(
            vec![x],
            FoFormula::implies(
                FoFormula::pred("p", vec![FoTerm::var("X")]),
                FoFormula::Eq(FoTerm::var("X"), FoTerm::constant("c")),
            ),
        );
        let mut p = FoProblem::default();
        p.push("ax1", FoRole::Axiom, f);
        assert_eq!(print_fof(&p), "fof(ax1, axiom, (![X]: (p(X) => (X = c)))).\n");
    }
}

//! Clause normal form for first-order problems: negation normal form,
//! Skolemization, distribution. Variable sorts are carried along for the
//! monotonicity analysis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::syntax::{FoFormula, FoProblem, FoRole, FoTerm, Sort};
use crate::term::Name;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoAtom {
    Pred(Name, Vec<FoTerm>),
    Eq(FoTerm, FoTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FoLit {
    pub positive: bool,
    pub atom: FoAtom,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FoClause {
    pub lits: Vec<FoLit>,
    /// Sorts of the clause's variables, where known.
    pub sorts: BTreeMap<Name, Sort>,
}

impl FoAtom {
    pub fn args(&self) -> Vec<&FoTerm> {
        match self {
            FoAtom::Pred(_, a) => a.iter().collect(),
            FoAtom::Eq(a, b) => vec![a, b],
        }
    }
}

impl FoClause {
    pub fn vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for l in &self.lits {
            for a in l.atom.args() {
                a.vars(&mut out);
            }
        }
        out
    }
}

impl fmt::Display for FoAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoAtom::Pred(p, a) => write!(f, "{}", FoTerm::Fn(p.clone(), a.clone())),
            FoAtom::Eq(a, b) => write!(f, "{a} = {b}"),
        }
    }
}

impl fmt::Display for FoLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            match &self.atom {
                FoAtom::Eq(a, b) => write!(f, "{a} != {b}"),
                a => write!(f, "~{a}"),
            }
        }
    }
}

impl fmt::Display for FoClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("$false");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Negation normal form with quantifiers; variables renamed apart.
#[derive(Clone, Debug)]
enum Nnf {
    Lit(FoLit),
    True,
    False,
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    All(Vec<(Name, Option<Sort>)>, Box<Nnf>),
    Ex(Vec<(Name, Option<Sort>)>, Box<Nnf>),
}

struct Converter {
    counter: usize,
    skolems: usize,
    used_symbols: BTreeSet<Name>,
    sorts: BTreeMap<Name, Sort>,
}

impl Converter {
    fn fresh_var(&mut self) -> Name {
        self.counter += 1;
        Name::from(format!("V{}", self.counter))
    }

    fn fresh_skolem(&mut self) -> Name {
        loop {
            let n = Name::from(format!("skf{}", self.skolems));
            self.skolems += 1;
            if !self.used_symbols.contains(&n) {
                return n;
            }
        }
    }

    fn nnf(&mut self, f: &FoFormula, pos: bool, ren: &BTreeMap<Name, FoTerm>) -> Nnf {
        use FoFormula as F;
        match f {
            F::True => {
                if pos {
                    Nnf::True
                } else {
                    Nnf::False
                }
            }
            F::False => {
                if pos {
                    Nnf::False
                } else {
                    Nnf::True
                }
            }
            F::Pred(p, a) => Nnf::Lit(FoLit {
                positive: pos,
                atom: FoAtom::Pred(p.clone(), a.iter().map(|t| subst(t, ren)).collect()),
            }),
            F::Eq(a, b) => Nnf::Lit(FoLit {
                positive: pos,
                atom: FoAtom::Eq(subst(a, ren), subst(b, ren)),
            }),
            F::Not(a) => self.nnf(a, !pos, ren),
            F::And(v) | F::Or(v) => {
                let parts = v.iter().map(|g| self.nnf(g, pos, ren)).collect();
                if matches!(f, F::And(_)) == pos {
                    Nnf::And(parts)
                } else {
                    Nnf::Or(parts)
                }
            }
            F::Implies(a, b) => {
                let na = self.nnf(a, !pos, ren);
                let nb = self.nnf(b, pos, ren);
                if pos {
                    Nnf::Or(vec![na, nb])
                } else {
                    Nnf::And(vec![na, nb])
                }
            }
            F::Iff(a, b) => {
                // pos: (¬a ∨ b) ∧ (a ∨ ¬b); neg: (a ∨ b) ∧ (¬a ∨ ¬b)
                let (a_t, a_f) = (self.nnf(a, true, ren), self.nnf(a, false, ren));
                let (b_t, b_f) = (self.nnf(b, true, ren), self.nnf(b, false, ren));
                if pos {
                    Nnf::And(vec![Nnf::Or(vec![a_f, b_t]), Nnf::Or(vec![a_t, b_f])])
                } else {
                    Nnf::And(vec![Nnf::Or(vec![a_t, b_t]), Nnf::Or(vec![a_f, b_f])])
                }
            }
            F::Forall(vs, b) | F::Exists(vs, b) => {
                let mut ren = ren.clone();
                let mut nv = Vec::new();
                for v in vs {
                    let n = self.fresh_var();
                    if let Some(s) = &v.sort {
                        self.sorts.insert(n.clone(), s.clone());
                    }
                    ren.insert(v.name.clone(), FoTerm::Var(n.clone()));
                    nv.push((n, v.sort.clone()));
                }
                let body = Box::new(self.nnf(b, pos, &ren));
                if matches!(f, F::Forall(..)) == pos {
                    Nnf::All(nv, body)
                } else {
                    Nnf::Ex(nv, body)
                }
            }
        }
    }

    /// Replaces existential variables by Skolem terms over the enclosing
    /// universal variables and drops quantifiers.
    fn skolemize(&mut self, n: Nnf, univ: &mut Vec<Name>, ren: &BTreeMap<Name, FoTerm>) -> Nnf {
        match n {
            Nnf::Lit(l) => Nnf::Lit(FoLit {
                positive: l.positive,
                atom: match l.atom {
                    FoAtom::Pred(p, a) => FoAtom::Pred(p, a.iter().map(|t| subst(t, ren)).collect()),
                    FoAtom::Eq(a, b) => FoAtom::Eq(subst(&a, ren), subst(&b, ren)),
                },
            }),
            Nnf::True | Nnf::False => n,
            Nnf::And(v) => Nnf::And(v.into_iter().map(|g| self.skolemize(g, univ, ren)).collect()),
            Nnf::Or(v) => Nnf::Or(v.into_iter().map(|g| self.skolemize(g, univ, ren)).collect()),
            Nnf::All(vs, b) => {
                let k = univ.len();
                univ.extend(vs.into_iter().map(|(n, _)| n));
                let out = self.skolemize(*b, univ, ren);
                univ.truncate(k);
                out
            }
            Nnf::Ex(vs, b) => {
                let mut ren = ren.clone();
                for (v, _) in vs {
                    let sk = self.fresh_skolem();
                    let args = univ.iter().map(|u| FoTerm::Var(u.clone())).collect();
                    ren.insert(v, FoTerm::Fn(sk, args));
                }
                self.skolemize(*b, univ, &ren)
            }
        }
    }
}

fn subst(t: &FoTerm, ren: &BTreeMap<Name, FoTerm>) -> FoTerm {
    match t {
        FoTerm::Var(v) => ren.get(v).cloned().unwrap_or_else(|| t.clone()),
        FoTerm::Fn(f, a) => FoTerm::Fn(f.clone(), a.iter().map(|x| subst(x, ren)).collect()),
    }
}

/// Quantifier-free NNF to clauses. A true formula yields no clauses.
fn distribute(n: &Nnf) -> Vec<Vec<FoLit>> {
    match n {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::True => vec![],
        Nnf::False => vec![vec![]],
        Nnf::And(v) => v.iter().flat_map(distribute).collect(),
        Nnf::Or(v) => {
            let mut acc: Vec<Vec<FoLit>> = vec![vec![]];
            for g in v {
                let d = distribute(g);
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for a in &acc {
                    for b in &d {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::All(..) | Nnf::Ex(..) => unreachable!("quantifiers removed before distribution"),
    }
}

/// Clause form of a problem. Conjectures are negated.
pub fn cnf(p: &FoProblem) -> Vec<FoClause> {
    let mut funs = BTreeSet::new();
    let mut preds = BTreeSet::new();
    for a in &p.formulas {
        a.formula.symbols(&mut funs, &mut preds);
    }
    let mut conv = Converter {
        counter: 0,
        skolems: 0,
        used_symbols: funs.into_iter().map(|(n, _)| n).collect(),
        sorts: BTreeMap::new(),
    };
    let mut out = Vec::new();
    for a in &p.formulas {
        let pos = a.role != FoRole::Conjecture;
        let n = conv.nnf(&a.formula, pos, &BTreeMap::new());
        let sk = conv.skolemize(n, &mut Vec::new(), &BTreeMap::new());
        for mut lits in distribute(&sk) {
            lits.sort();
            lits.dedup();
            let taut = lits
                .iter()
                .any(|l| lits.iter().any(|m| m.atom == l.atom && m.positive != l.positive));
            if taut {
                continue;
            }
            let mut c = FoClause {
                lits,
                sorts: BTreeMap::new(),
            };
            for v in c.vars() {
                if let Some(s) = conv.sorts.get(&v) {
                    c.sorts.insert(v, s.clone());
                }
            }
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::syntax::FoVar;

    fn p(a: FoTerm) -> FoFormula {
        FoFormula::pred("p", vec![a])
    }

    #[test]
    fn negated_conjecture_is_skolemized() {
        let mut prob = FoProblem::default();
        prob.push(
            "c",
            FoRole::Conjecture,
            FoFormula::forall(vec![FoVar::new("X", Some("i".into()))], p(FoTerm::var("X"))),
        );
        let cs = cnf(&prob);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].to_string(), "~p(skf0)");
    }

    #[test]
    fn skolem_depends_on_enclosing_universals() {
        let mut prob = FoProblem::default();
        let r = FoFormula::pred("r", vec![FoTerm::var("X"), FoTerm::var("Y")]);
        prob.push(
            "a",
            FoRole::Axiom,
            FoFormula::forall(
                vec![FoVar::new("X", None)],
                FoFormula::exists(vec![FoVar::new("Y", None)], r),
            ),
        );
        assert_eq!(cnf(&prob)[0].to_string(), "r(V1,skf0(V1))");
    }

    #[test]
    fn iff_splits_into_two_clauses() {
        let mut prob = FoProblem::default();
        prob.push(
            "a",
            FoRole::Axiom,
            FoFormula::iff(FoFormula::pred("a", vec![]), FoFormula::pred("b", vec![])),
        );
        let shown: Vec<String> = cnf(&prob).iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["~a | b", "~b | a"]);
    }

    #[test]
    fn sorts_follow_variables() {
        let mut prob = FoProblem::default();
        prob.push(
            "a",
            FoRole::Axiom,
            FoFormula::forall(vec![FoVar::new("X", Some("o".into()))], p(FoTerm::var("X"))),
        );
        let c = &cnf(&prob)[0];
        assert_eq!(c.sorts.values().cloned().collect::<Vec<_>>(), vec![Name::from("o")]);
    }
}

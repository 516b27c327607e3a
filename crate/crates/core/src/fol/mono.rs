//! Monotonicity of sorts, decided by a SAT encoding.
//!
//! A sort is monotone when any model can be enlarged at that sort. New
//! elements copy an old one for function symbols, while each predicate is
//! extended on them as a copy unless it is made constantly true (`T_P`)
//! or constantly false (`F_P`). A variable is guarded in a clause by a literal that
//! becomes true on new elements: `P(..X..)` with `T_P` or `¬P(..X..)` with
//! `F_P`. Unguarded positive equations `X = t` and literals whose predicate
//! extension could falsify them must be guarded elsewhere in the clause.

use std::collections::{BTreeMap, BTreeSet};

use super::cnf::{cnf, FoAtom, FoClause};
use super::sat::{sat_solve, SatInstance};
use super::syntax::{FoProblem, FoTerm, Sort};
use crate::term::Name;

/// Is `sort` monotone in the clause set?
pub fn is_monotone(clauses: &[FoClause], sort: &str) -> bool {
    let mut inst = SatInstance::new();
    let mut sel: BTreeMap<Name, (i32, i32)> = BTreeMap::new();
    let mut selector = |inst: &mut SatInstance, p: &Name| -> (i32, i32) {
        *sel.entry(p.clone()).or_insert_with(|| {
            let (t, f) = (inst.var(), inst.var());
            inst.add(vec![-t, -f]);
            (t, f)
        })
    };
    for c in clauses {
        let vars: Vec<&Name> = c
            .sorts
            .iter()
            .filter(|(_, s)| s.as_ref() == sort)
            .map(|(v, _)| v)
            .collect();
        for x in vars {
            let direct = |args: &[FoTerm]| args.iter().any(|a| matches!(a, FoTerm::Var(v) if v == x));
            // literals that guard x, as selector literals
            let mut guards: Vec<i32> = Vec::new();
            let mut needs: Vec<i32> = Vec::new();
            let mut naked = false;
            for l in &c.lits {
                match &l.atom {
                    FoAtom::Pred(p, args) if direct(args) => {
                        let (t, f) = selector(&mut inst, p);
                        if l.positive {
                            guards.push(t);
                            needs.push(f);
                        } else {
                            guards.push(f);
                            needs.push(t);
                        }
                    }
                    FoAtom::Eq(a, b)
                        if l.positive
                            && (matches!(a, FoTerm::Var(v) if v == x) || matches!(b, FoTerm::Var(v) if v == x)) =>
                    {
                        naked = true;
                    }
                    _ => {}
                }
            }
            if naked {
                inst.add(guards.clone());
            }
            for n in needs {
                let mut cl = vec![-n];
                cl.extend(guards.iter().copied());
                inst.add(cl);
            }
        }
    }
    sat_solve(&inst).is_sat()
}

/// Sorts of quantified variables that are monotone in the problem.
pub fn monotone_sorts(p: &FoProblem) -> BTreeSet<Sort> {
    let clauses = cnf(p);
    let mut sorts: BTreeSet<Sort> = BTreeSet::new();
    for c in &clauses {
        sorts.extend(c.sorts.values().cloned());
    }
    sorts.into_iter().filter(|s| is_monotone(&clauses, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::cnf::FoLit;

    fn clause(lits: Vec<(bool, FoAtom)>, vars: &[(&str, &str)]) -> FoClause {
        FoClause {
            lits: lits
                .into_iter()
                .map(|(positive, atom)| FoLit { positive, atom })
                .collect(),
            sorts: vars.iter().map(|(v, s)| (Name::from(*v), Name::from(*s))).collect(),
        }
    }

    fn x() -> FoTerm {
        FoTerm::var("X")
    }

    #[test]
    fn equality_free_is_monotone() {
        let c = clause(vec![(true, FoAtom::Pred("p".into(), vec![x()]))], &[("X", "i")]);
        assert!(is_monotone(&[c], "i"));
    }

    #[test]
    fn empty_problem_is_monotone() {
        assert!(is_monotone(&[], "i"));
    }

    #[test]
    fn naked_equation_is_not_monotone() {
        // X = Y bounds the domain to one element
        let c = clause(
            vec![(true, FoAtom::Eq(x(), FoTerm::var("Y")))],
            &[("X", "i"), ("Y", "i")],
        );
        assert!(!is_monotone(&[c], "i"));
        // a different sort is unaffected
        let c = clause(
            vec![(true, FoAtom::Eq(x(), FoTerm::var("Y")))],
            &[("X", "j"), ("Y", "j")],
        );
        assert!(is_monotone(&[c], "i"));
    }

    #[test]
    fn guarded_equation_is_monotone() {
        // ¬q(X) ∨ X = c : extend q false on new elements
        let c = clause(
            vec![
                (false, FoAtom::Pred("q".into(), vec![x()])),
                (true, FoAtom::Eq(x(), FoTerm::constant("c"))),
            ],
            &[("X", "i")],
        );
        assert!(is_monotone(&[c], "i"));
    }

    #[test]
    fn conflicting_extensions() {
        // ¬q(X) ∨ X = c needs F_q; q(X) ∨ X = d needs T_q
        let c1 = clause(
            vec![
                (false, FoAtom::Pred("q".into(), vec![x()])),
                (true, FoAtom::Eq(x(), FoTerm::constant("c"))),
            ],
            &[("X", "i")],
        );
        let c2 = clause(
            vec![
                (true, FoAtom::Pred("q".into(), vec![x()])),
                (true, FoAtom::Eq(x(), FoTerm::constant("d"))),
            ],
            &[("X", "i")],
        );
        assert!(!is_monotone(&[c1, c2], "i"));
    }
}

use super::{rules, RuleCtx, RuleResult};
use crate::clause::{Clause, Literal, Origin};
use crate::term::{Term, Var};
use crate::unify::preunify;

/// How two literal atoms are to be unified, if at all. Equations are only
/// unified with equations (in both orientations); other atoms only with
/// atoms whose heads could become equal.
fn unifier_problems(a: &Term, b: &Term) -> Vec<Vec<(Term, Term)>> {
    match (a.as_eq(), b.as_eq()) {
        (Some((l1, r1)), Some((l2, r2))) => {
            if l1.ty() != l2.ty() {
                return Vec::new();
            }
            let mut out = vec![vec![(l1.clone(), l2.clone()), (r1.clone(), r2.clone())]];
            if !(l1 == r1 && l2 == r2) {
                out.push(vec![(l1.clone(), r2.clone()), (r1.clone(), l2.clone())]);
            }
            out
        }
        (None, None) => {
            let compatible = a.is_flex() || b.is_flex() || a.head() == b.head();
            if compatible {
                vec![vec![(a.clone(), b.clone())]]
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    }
}

/// Preunifies `pairs` and instantiates the remaining literals and
/// constraints with each solution. Cut-off branches only mark `ctx`.
fn solve_and_conclude(
    pairs: &[(Term, Term)],
    lits: &[Literal],
    cons: &[(Term, Term)],
    vars: &[Var],
    rule: &str,
    parents: &[&Clause],
    ctx: &mut RuleCtx,
) -> Vec<Clause> {
    let res = preunify(pairs, &ctx.unify, ctx.namer);
    if res.depth_exhausted {
        ctx.exhausted = true;
    }
    let mut out = Vec::new();
    for sol in res.solutions {
        let s = &sol.subst;
        let mut new_lits: Vec<Literal> = lits
            .iter()
            .map(|l| Literal::new(s.apply(&l.atom), l.positive))
            .collect();
        new_lits.extend(
            sol.deferred
                .iter()
                .map(|(a, b)| Literal::neg(Term::eq(a.clone(), b.clone()))),
        );
        let mut new_cons: Vec<(Term, Term)> = cons.iter().map(|(a, b)| (s.apply(a), s.apply(b))).collect();
        new_cons.extend(sol.flex_flex.iter().cloned());
        let origin = Origin::new(rule, parents).with_note(s.restrict(vars).to_string());
        out.extend(ctx.conclude(new_lits, new_cons, origin));
    }
    out
}

/// Resolves every complementary, unifiable literal pair of `c1` and `c2`.
/// `c2` is renamed apart first.
pub fn resolve(c1: &Clause, c2: &Clause, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    let d = c2.renamed_with_prefix("Y");
    let mut vars = c1.vars();
    vars.extend(d.vars());
    for (i, l1) in c1.literals.iter().enumerate() {
        for (j, l2) in d.literals.iter().enumerate() {
            if l1.positive == l2.positive {
                continue;
            }
            for pairs in unifier_problems(&l1.atom, &l2.atom) {
                let lits: Vec<Literal> = c1
                    .literals
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| l.clone())
                    .chain(
                        d.literals
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, l)| l.clone()),
                    )
                    .collect();
                let cons: Vec<(Term, Term)> = c1.constraints.iter().chain(&d.constraints).cloned().collect();
                r.new_clauses.extend(solve_and_conclude(
                    &pairs,
                    &lits,
                    &cons,
                    &vars,
                    rules::RESOLVE,
                    &[c1, c2],
                    ctx,
                ));
            }
        }
    }
    r
}

/// Merges two same-polarity literals of `c` by unifying them.
pub fn factorise(c: &Clause, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    let vars = c.vars();
    for i in 0..c.literals.len() {
        for j in i + 1..c.literals.len() {
            let (a, b) = (&c.literals[i], &c.literals[j]);
            if a.positive != b.positive {
                continue;
            }
            for pairs in unifier_problems(&a.atom, &b.atom) {
                let lits: Vec<Literal> = c
                    .literals
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, l)| l.clone())
                    .collect();
                r.new_clauses.extend(solve_and_conclude(
                    &pairs,
                    &lits,
                    &c.constraints,
                    &vars,
                    rules::FACTORISE,
                    &[c],
                    ctx,
                ));
            }
        }
    }
    r
}

/// Removes a negative equation `[s = t]^ff` by unifying `s` and `t`.
pub fn eq_resolve(c: &Clause, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    let vars = c.vars();
    for (i, l) in c.literals.iter().enumerate() {
        if l.positive {
            continue;
        }
        let Some((s, t)) = l.as_eq() else {
            continue;
        };
        let pairs = [(s.clone(), t.clone())];
        let lits: Vec<Literal> = c
            .literals
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, l)| l.clone())
            .collect();
        r.new_clauses.extend(solve_and_conclude(
            &pairs,
            &lits,
            &c.constraints,
            &vars,
            rules::EQ_RESOLVE,
            &[c],
            ctx,
        ));
    }
    r
}

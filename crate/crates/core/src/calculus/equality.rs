//! Recognition of defined equality: Leibniz (`P A` false, `P B` true) and
//! Andrews (`P A A` false) patterns instantiate the set variable with
//! primitive equality.

use super::{rules, RuleCtx, RuleResult};
use crate::clause::{Clause, Literal, Origin};
use crate::term::{Node, Substitution, Term, Type, Var};

/// For every `[P A]^ff`, `[P B]^tt` in `c` with `P` a variable, adds
/// `c{λX. A = X / P}`, which simplifies to the rest of `c` (instantiated)
/// plus `[A = B]^tt`.
pub fn leib_eq(c: &Clause, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    let mut seen: Vec<(Var, Term)> = Vec::new();
    for neg in c.literals.iter().filter(|l| !l.positive) {
        let Some((p, a)) = unary_flex(&neg.atom) else {
            continue;
        };
        let matched = c
            .literals
            .iter()
            .any(|pos| pos.positive && unary_flex(&pos.atom).is_some_and(|(q, _)| q == p));
        if !matched || seen.contains(&(p.clone(), a.clone())) {
            continue;
        }
        seen.push((p.clone(), a.clone()));
        let x = Term::bound(0, a.ty());
        let binding = Term::abs(a.ty(), Term::eq(a.shift(1, 0), x));
        r.new_clauses.extend(instantiate(c, &p, binding, rules::LEIB_EQ, ctx));
    }
    r
}

/// For every `[P A A]^ff` in `c` with `P` a variable, adds
/// `c{λXλY. X = Y / P}`; the matched literal simplifies away.
pub fn andr_eq(c: &Clause, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    let mut seen: Vec<Var> = Vec::new();
    for neg in c.literals.iter().filter(|l| !l.positive) {
        let (head, args) = neg.atom.spine();
        let Some((n, ty)) = head.as_free() else {
            continue;
        };
        if args.len() != 2 || args[0] != args[1] {
            continue;
        }
        let alpha = args[0].ty();
        if *ty != Type::curried([alpha.clone(), alpha.clone()], Type::O) {
            continue;
        }
        let p = Var::new(n.clone(), ty.clone());
        if seen.contains(&p) {
            continue;
        }
        seen.push(p.clone());
        let eq = Term::eq(Term::bound(1, alpha.clone()), Term::bound(0, alpha.clone()));
        let binding = Term::abs(alpha.clone(), Term::abs(alpha, eq));
        r.new_clauses.extend(instantiate(c, &p, binding, rules::ANDR_EQ, ctx));
    }
    r
}

/// `P A` with `P` a free variable of type `α→o` and one argument.
fn unary_flex(t: &Term) -> Option<(Var, Term)> {
    let Node::App(f, a) = t.node() else {
        return None;
    };
    let (n, ty) = f.as_free()?;
    Some((Var::new(n.clone(), ty.clone()), a.clone()))
}

fn instantiate(c: &Clause, p: &Var, binding: Term, rule: &str, ctx: &mut RuleCtx) -> Vec<Clause> {
    if binding.has_loose_bvars() {
        return Vec::new();
    }
    let s = Substitution::single(p, binding).expect("well-typed binding");
    let lits: Vec<Literal> = c
        .literals
        .iter()
        .map(|l| Literal::new(s.apply(&l.atom), l.positive))
        .collect();
    let cons = c.constraints.iter().map(|(a, b)| (s.apply(a), s.apply(b))).collect();
    let origin = Origin::new(rule, &[c]).with_note(s.to_string());
    ctx.conclude(lits, cons, origin)
}

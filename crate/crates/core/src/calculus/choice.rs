use std::collections::BTreeMap;

use super::{rules, ChoiceRegister, RuleCtx, RuleResult};
use crate::clause::{Clause, Literal, Origin};
use crate::term::{Name, Node, Term, Type};

/// If `c` is `[P X]^ff ∨ [P (f P)]^tt` with `P`, `X` variables and `f` a
/// constant of choice type, returns `f` and its type.
pub fn is_choice_axiom_shape(c: &Clause) -> Option<(Name, Type)> {
    if c.literals.len() != 2 || !c.constraints.is_empty() {
        return None;
    }
    let (neg, pos) = match (&c.literals[0], &c.literals[1]) {
        (a, b) if !a.positive && b.positive => (a, b),
        (a, b) if a.positive && !b.positive => (b, a),
        _ => return None,
    };
    let Node::App(p1, x) = neg.atom.node() else {
        return None;
    };
    let (pname, pty) = p1.as_free()?;
    let (xname, _) = x.as_free()?;
    if xname == pname {
        return None;
    }
    let Node::App(p2, fp) = pos.atom.node() else {
        return None;
    };
    if p2 != p1 {
        return None;
    }
    let Node::App(f, p3) = fp.node() else {
        return None;
    };
    if p3 != p1 {
        return None;
    }
    let (fname, fty) = f.as_const()?;
    let elem = fty.choice_elem()?;
    if *pty != Type::predicate(elem.clone()) {
        return None;
    }
    Some((fname.clone(), fty.clone()))
}

/// Removes a choice-axiom clause and registers its choice function.
pub fn detect_choice_fn(c: &Clause, reg: &mut ChoiceRegister) -> RuleResult {
    let mut r = RuleResult::default();
    if let Some((f, ty)) = is_choice_axiom_shape(c) {
        r.removed.push(c.id);
        if reg.register(f.clone(), &ty) {
            r.registered.push((f, ty));
        }
    }
    r
}

/// Subterms `E B` of `c` where `E` is a registered choice function or a
/// free variable of choice type, and `B` has no variable bound outside the
/// subterm. `B` that is a lone free variable is skipped.
pub fn choice_candidates(c: &Clause, reg: &ChoiceRegister) -> Vec<(Term, Term)> {
    let mut out: Vec<(Term, Term)> = Vec::new();
    for lit in &c.literals {
        lit.atom.visit(&mut |t, _| {
            let Node::App(e, b) = t.node() else {
                return;
            };
            let eligible = match e.node() {
                Node::Const(n, _) => reg.contains(n),
                Node::Free(_, ty) => ty.choice_elem().is_some(),
                _ => false,
            };
            if !eligible || b.has_loose_bvars() || b.as_free().is_some() {
                return;
            }
            let pair = (e.clone(), b.clone());
            if !out.contains(&pair) {
                out.push(pair);
            }
        });
    }
    out
}

/// Adds `[B Y]^ff ∨ [B (ε B)]^tt` for every candidate `E B` of `c`.
pub fn apply_choice(c: &Clause, reg: &mut ChoiceRegister, ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    for (e, b) in choice_candidates(c, reg) {
        let alpha = b.ty().domain().cloned().expect("predicate argument");
        let eps = match e.node() {
            Node::Const(..) => e.clone(),
            _ => {
                let (eps, minted) = reg.function_for(&alpha, ctx.namer);
                if minted {
                    let (n, ty) = eps.as_const().expect("constant");
                    r.registered.push((n.clone(), ty.clone()));
                }
                eps
            }
        };
        let eps_name = eps.as_const().expect("constant").0.clone();
        if !reg.mark_emitted(&eps_name, canonical_key(&b)) {
            continue;
        }
        let y = ctx.namer.fresh_var(alpha);
        let lits = vec![
            Literal::neg(Term::app(b.clone(), y)),
            Literal::pos(Term::app(b.clone(), Term::app(eps.clone(), b.clone()))),
        ];
        let origin = Origin::new(rules::CHOICE, &[c]).with_note(format!("{eps_name} @ {b}"));
        r.new_clauses.extend(ctx.conclude(lits, vec![], origin));
    }
    r
}

/// Rendering of `t` with free variables renamed by first occurrence.
fn canonical_key(t: &Term) -> String {
    let mut vars = Vec::new();
    t.free_var_list(&mut vars);
    let map: BTreeMap<Name, Name> = vars
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v.name, Name::from(format!("U{i}"))))
        .collect();
    t.rename_free(&|n, _| map.get(n).cloned()).to_string()
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::clausify::Namer;
    use crate::unify::UnifyOptions;

    fn ac_clause(f: &str) -> Clause {
        let pt = Type::predicate(i());
        let p = var("P", pt.clone());
        let x = var("X", i());
        let sk = Term::constant(f, Type::choice(i()));
        clause(vec![
            (Term::app(p.clone(), x), false),
            (Term::app(p.clone(), Term::app(sk, p)), true),
        ])
    }

    #[test]
    fn detects_and_registers() {
        let mut reg = ChoiceRegister::new();
        let r = detect_choice_fn(&ac_clause("sk0"), &mut reg);
        assert_eq!(r.removed, vec![1]);
        assert!(reg.contains("sk0"));
    }

    #[test]
    fn unit_clause_is_not_choice() {
        let mut reg = ChoiceRegister::new();
        let cl = clause(vec![(Term::app(pred("p"), c("c")), true)]);
        assert!(detect_choice_fn(&cl, &mut reg).is_empty());
    }

    #[test]
    fn different_predicate_variables_are_not_choice() {
        let pt = Type::predicate(i());
        let sk = Term::constant("sk0", Type::choice(i()));
        let cl = clause(vec![
            (Term::app(var("P", pt.clone()), var("X", i())), false),
            (Term::app(var("Q", pt.clone()), Term::app(sk, var("Q", pt))), true),
        ]);
        assert!(detect_choice_fn(&cl, &mut ChoiceRegister::new()).is_empty());
    }

    #[test]
    fn choice_instance_for_registered_function() {
        let mut reg = ChoiceRegister::new();
        detect_choice_fn(&ac_clause("eps"), &mut reg);
        let eps = Term::constant("eps", Type::choice(i()));
        let q = pred("q");
        let cl = clause(vec![(Term::app(q, Term::app(eps, pred("p"))), true)]);
        let mut namer = Namer::new();
        let mut ctx = RuleCtx::new(UnifyOptions::default(), &mut namer);
        let r = apply_choice(&cl, &mut reg, &mut ctx);
        assert_eq!(strs(&r.new_clauses), ["[(p @ X0)]^ff ∨ [(p @ (eps @ p))]^tt"]);
        // the same instance is not produced twice
        assert!(apply_choice(&cl, &mut reg, &mut ctx).new_clauses.is_empty());
    }

    #[test]
    fn bound_argument_is_not_instantiated() {
        // q (λx. eps (r x)): `r x` mentions a variable bound outside
        let mut reg = ChoiceRegister::new();
        detect_choice_fn(&ac_clause("eps"), &mut reg);
        let eps = Term::constant("eps", Type::choice(i()));
        let r = Term::constant("r", Type::curried([i(), i()], Type::O));
        let inner = Term::app(eps, Term::app(r, Term::bound(0, i())));
        let q = Term::constant("q", Type::fun(Type::fun(i(), i()), Type::O));
        let cl = clause(vec![(Term::app(q, Term::abs(i(), inner)), true)]);
        assert!(choice_candidates(&cl, &reg).is_empty());
    }

    #[test]
    fn nothing_without_choice_terms() {
        let mut reg = ChoiceRegister::new();
        let cl = clause(vec![(Term::app(pred("p"), c("c")), true)]);
        let mut namer = Namer::new();
        let mut ctx = RuleCtx::new(UnifyOptions::default(), &mut namer);
        assert!(apply_choice(&cl, &mut reg, &mut ctx).is_empty());
    }

    #[test]
    fn free_choice_variable_mints_default() {
        let mut reg = ChoiceRegister::new();
        let e = var("E", Type::choice(i()));
        let cl = clause(vec![(Term::app(pred("q"), Term::app(e, pred("p"))), false)]);
        let mut namer = Namer::new();
        let mut ctx = RuleCtx::new(UnifyOptions::default(), &mut namer);
        let r = apply_choice(&cl, &mut reg, &mut ctx);
        assert_eq!(r.registered.len(), 1);
        assert_eq!(strs(&r.new_clauses), ["[(p @ X0)]^ff ∨ [(p @ (sk0 @ p))]^tt"]);
    }
}

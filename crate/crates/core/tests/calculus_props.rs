mod support;

use std::collections::BTreeSet;

use proptest::prelude::*;

use hol_core::calculus::{apply_choice, detect_choice_fn, subsumes, ChoiceRegister, RuleCtx};
use hol_core::clause::{Clause, Literal, Origin};
use hol_core::clausify::{normalize_clause, ExtOptions, Namer};
use hol_core::model::{find_model, OracleLimits, Verdict};
use hol_core::term::{Term, Type, Var};
use hol_core::unify::UnifyOptions;

use support::{choice_axiom_clause, i};

fn pt() -> Type {
    Type::predicate(i())
}

fn eps() -> Term {
    Term::constant("eps", Type::choice(i()))
}

/// Atoms over two set variables, two individual variables, a constant,
/// a predicate constant and the candidate choice function `eps`.
fn choice_atoms() -> Vec<Term> {
    let (pv, qv) = (Term::free("X0", pt()), Term::free("X2", pt()));
    let (y, z) = (Term::free("X1", i()), Term::free("X3", i()));
    let a = Term::constant("a", i());
    let p = Term::constant("p", pt());
    let e = |t: &Term| Term::app(eps(), t.clone());
    vec![
        Term::app(pv.clone(), y.clone()),
        Term::app(pv.clone(), z),
        Term::app(pv.clone(), a),
        Term::app(pv.clone(), e(&pv)),
        Term::app(pv.clone(), e(&qv)),
        Term::app(pv.clone(), e(&p)),
        Term::app(qv.clone(), y.clone()),
        Term::app(qv, e(&pv)),
        Term::app(p.clone(), y),
        Term::app(p.clone(), e(&pv)),
        Term::app(p.clone(), e(&p)),
    ]
}

fn two_literal_clauses() -> Vec<Clause> {
    let lits: Vec<Literal> = choice_atoms()
        .into_iter()
        .flat_map(|t| [Literal::pos(t.clone()), Literal::neg(t)])
        .collect();
    let mut out = Vec::new();
    for x in 0..lits.len() {
        for y in x + 1..lits.len() {
            let c = Clause::new(
                vec![lits[x].clone(), lits[y].clone()],
                vec![],
                Origin::input("c", false),
            );
            out.extend(c);
        }
    }
    out
}

fn valid(premises: &[Term], goal: &Term) -> Option<bool> {
    let mut fs = premises.to_vec();
    fs.push(Term::not(goal.clone()));
    match find_model(&fs, &BTreeSet::new(), &OracleLimits::default()) {
        Verdict::NoModel => Some(true),
        Verdict::Model(_) => Some(false),
        Verdict::Refused(_) => None,
    }
}

/// `c` says exactly that `eps` is a choice function, on domains up to size 3.
fn states_choice(c: &Clause) -> Option<bool> {
    let ac = choice_axiom_clause().to_formula();
    let f = c.to_formula();
    Some(valid(std::slice::from_ref(&f), &ac)? && valid(&[ac], &f)?)
}

#[test]
fn detect_choice_fn_fires_exactly_on_choice_axioms() {
    let clauses = two_literal_clauses();
    assert!(clauses.len() > 200);
    let mut fired = 0;
    for c in &clauses {
        let mut reg = ChoiceRegister::new();
        let r = detect_choice_fn(c, &mut reg);
        let semantic = states_choice(c).unwrap_or_else(|| panic!("oracle refused {c}"));
        assert_eq!(!r.removed.is_empty(), semantic, "{c}");
        if semantic {
            fired += 1;
            assert!(reg.contains("eps"));
        }
    }
    assert!(fired >= 1);
}

/// Predicates over `ι` used as choice arguments, including alpha-variants.
fn predicate_pool() -> Vec<Term> {
    let p = Term::constant("p", pt());
    let q = Term::constant("q", pt());
    let r = Term::constant("r", Type::fun(i(), pt()));
    let a = Term::constant("a", i());
    let (x, y) = (Var::new("x", i()), Var::new("y", i()));
    let lam = |v: &Var, body: Term| Term::lambda(v, &body);
    let fv = |n: &str| Term::free(n, pt());
    vec![
        p.clone(),
        q.clone(),
        lam(&x, Term::not(Term::app(p.clone(), x.term()))),
        lam(&y, Term::not(Term::app(p.clone(), y.term()))),
        lam(
            &x,
            Term::and(Term::app(p.clone(), x.term()), Term::app(q.clone(), x.term())),
        ),
        lam(&x, Term::and(Term::app(q, x.term()), Term::app(p.clone(), x.term()))),
        lam(&x, Term::apps(r.clone(), [x.term(), a.clone()])),
        lam(&y, Term::apps(r, [a, y.term()])),
        lam(
            &x,
            Term::or(Term::app(fv("X5"), x.term()), Term::app(p.clone(), x.term())),
        ),
        lam(&y, Term::or(Term::app(fv("X9"), y.term()), Term::app(p, y.term()))),
    ]
}

fn is_variant(c: &Clause, d: &Clause) -> bool {
    c.variant_key() == d.variant_key()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_choice_emits_no_alpha_duplicates(picks in prop::collection::vec(prop::collection::vec(0usize..10, 1..4), 1..5)) {
        let pool = predicate_pool();
        let mut reg = ChoiceRegister::new();
        reg.register("eps".into(), &Type::choice(i()));
        let mut namer = Namer::new();
        let mut emitted: Vec<Clause> = Vec::new();
        let mut used = Vec::new();
        for pick in &picks {
            let lits = pick
                .iter()
                .map(|&k| Literal::pos(Term::app(Term::constant("s", pt()), Term::app(eps(), pool[k].clone()))))
                .collect();
            let Some(c) = Clause::new(lits, vec![], Origin::input("c", false)) else { continue };
            used.extend(pick.iter().copied());
            let mut ctx = RuleCtx::new(UnifyOptions::default(), &mut namer);
            emitted.extend(apply_choice(&c, &mut reg, &mut ctx).new_clauses);
        }
        for (k, c) in emitted.iter().enumerate() {
            for d in &emitted[k + 1..] {
                prop_assert!(!is_variant(c, d), "{} and {}", c, d);
                prop_assert!(!(subsumes(c, d) && subsumes(d, c)), "{} and {}", c, d);
            }
        }
        // every argument used has its instance
        for k in used {
            let b = &pool[k];
            let y = Term::free("X100", i());
            let want = Clause::new(
                vec![Literal::neg(Term::app(b.clone(), y)), Literal::pos(Term::app(b.clone(), Term::app(eps(), b.clone())))],
                vec![],
                Origin::input("want", false),
            )
            .expect("non-trivial");
            let want = normalize_clause(want, ExtOptions::default(), &mut Namer::new());
            for w in &want {
                prop_assert!(emitted.iter().any(|c| subsumes(c, w) && subsumes(w, c)), "missing instance {} in {:?}", w, emitted.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            }
        }
    }
}

//! From formulas to clauses.
//!
//! Clausification is lazy: a literal is expanded only when its atom has a
//! logical constant at the head. Logical structure below a non-logical head
//! stays inside the atom and is handled by unification and the calculus.
//! The same expansion rules run on every clause the calculus derives.

use crate::clause::{Clause, Literal, Origin};
use crate::term::{beta_normalize, logic, Fresh, Name, Node, Term, Type, Var};
use crate::tptp::{AnnotatedFormula, Problem, Role};

/// Extensionality switches shared by clausification and unification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtOptions {
    pub boolean_ext: bool,
    pub functional_ext: bool,
}

impl Default for ExtOptions {
    fn default() -> Self {
        ExtOptions {
            boolean_ext: true,
            functional_ext: true,
        }
    }
}

/// Supplier of fresh variables and Skolem symbols. Skolems are named
/// `sk<N>`, a prefix rejected in input, so they never collide.
#[derive(Clone, Debug, Default)]
pub struct Namer {
    vars: Fresh,
    skolems: Fresh,
    /// Every Skolem constant minted so far, with its type.
    pub introduced: Vec<(Name, Type)>,
}

impl Namer {
    pub fn new() -> Namer {
        Namer::default()
    }

    /// Keeps future Skolem names clear of the given symbols.
    pub fn avoid<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        self.skolems.avoid("sk", names);
    }

    pub fn fresh_var(&mut self, ty: Type) -> Term {
        Term::free(self.vars.name("V"), ty)
    }

    pub fn fresh_var_named(&mut self, prefix: &str, ty: Type) -> Var {
        Var::new(self.vars.name(prefix), ty)
    }

    /// A new constant of type `ty`.
    pub fn skolem_const(&mut self, ty: Type) -> Term {
        let name = self.skolems.name("sk");
        self.introduced.push((name.clone(), ty.clone()));
        Term::constant(name, ty)
    }

    /// A new Skolem function applied to `args`, with result type `ty`.
    pub fn skolem_term(&mut self, args: &[Var], ty: Type) -> Term {
        let fty = Type::curried(args.iter().map(|v| v.ty.clone()).collect::<Vec<_>>(), ty);
        let f = self.skolem_const(fty);
        Term::apps(f, args.iter().map(Var::term))
    }
}

/// Replaces `c` by `t` for every definition `c = t` (or `c <=> t`) whose
/// right side does not mention `c`. Other definitions are kept as axioms.
pub fn unfold_definitions(formulas: &[AnnotatedFormula]) -> Vec<AnnotatedFormula> {
    let mut defs: Vec<(Name, Term)> = Vec::new();
    let mut rest: Vec<AnnotatedFormula> = Vec::new();
    for f in formulas {
        if f.role == Role::Definition {
            if let Some((c, body)) = definition_shape(&f.formula) {
                // Earlier definitions may occur in later bodies.
                let body = defs.iter().fold(body, |b, (n, d)| b.replace_const(n, d));
                if !body.any_subterm(&|t| t.is_const_named(&c)) {
                    for (_, d) in defs.iter_mut() {
                        *d = d.replace_const(&c, &body);
                    }
                    defs.push((c, body));
                    continue;
                }
            }
        }
        rest.push(f.clone());
    }
    rest.into_iter()
        .map(|mut f| {
            for (n, d) in &defs {
                f.formula = f.formula.replace_const(n, d);
            }
            f.formula = beta_normalize(&f.formula);
            f
        })
        .collect()
}

fn definition_shape(t: &Term) -> Option<(Name, Term)> {
    let (l, r) = match t.as_eq() {
        Some(p) => p,
        None => {
            let a = t.logical_args(logic::IFF, 2)?;
            (a[0], a[1])
        }
    };
    let (n, _) = l.as_const()?;
    if logic::is_logical(n) {
        return None;
    }
    Some((n.clone(), r.clone()))
}

/// Clausifies a whole problem: definitions are unfolded, conjectures are
/// conjoined and negated, and every formula is expanded to clauses.
pub fn clausify(p: &Problem, opts: ExtOptions, namer: &mut Namer) -> Vec<Clause> {
    namer.avoid(p.signature.keys().map(|n| n.as_ref()));
    let formulas = unfold_definitions(&p.formulas);
    let mut out = Vec::new();
    let conjectures: Vec<&AnnotatedFormula> = formulas.iter().filter(|f| f.role == Role::Conjecture).collect();
    for f in formulas.iter().filter(|f| f.role != Role::Conjecture) {
        let conj = f.role == Role::NegatedConjecture;
        let c = Clause::new(
            vec![Literal::pos(f.formula.clone())],
            vec![],
            Origin::input(&f.name, conj),
        );
        out.extend(c.into_iter().flat_map(|c| normalize_clause(c, opts, namer)));
    }
    if !conjectures.is_empty() {
        let goal = conjectures
            .iter()
            .map(|f| f.formula.clone())
            .reduce(Term::and)
            .expect("non-empty");
        let name = conjectures
            .iter()
            .map(|f| f.name.as_str())
            .collect::<Vec<_>>()
            .join(",");
        let c = Clause::new(vec![Literal::neg(goal)], vec![], Origin::input(&name, true));
        out.extend(c.into_iter().flat_map(|c| normalize_clause(c, opts, namer)));
    }
    out
}

/// Applies the expansion rules until no literal has a logical head.
/// Tautologies disappear; the origin of `c` is kept on every result.
pub fn normalize_clause(c: Clause, opts: ExtOptions, namer: &mut Namer) -> Vec<Clause> {
    let mut work = vec![c];
    let mut done = Vec::new();
    while let Some(c) = work.pop() {
        match expand_first(&c, opts, namer) {
            None => done.push(c),
            Some(parts) => {
                for (lits, cons) in parts {
                    if let Some(n) = Clause::new(lits, cons, c.origin.clone()) {
                        work.push(n);
                    }
                }
            }
        }
    }
    done.reverse();
    done
}

type Parts = Vec<(Vec<Literal>, Vec<(Term, Term)>)>;

/// Expands the first expandable literal, returning the replacement clauses.
fn expand_first(c: &Clause, opts: ExtOptions, namer: &mut Namer) -> Option<Parts> {
    for (i, lit) in c.literals.iter().enumerate() {
        if let Some(alts) = expand_literal(lit, opts, namer) {
            let rest: Vec<Literal> = c
                .literals
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, l)| l.clone())
                .collect();
            return Some(
                alts.into_iter()
                    .map(|new| {
                        let mut lits = rest.clone();
                        lits.extend(new);
                        (lits, c.constraints.clone())
                    })
                    .collect(),
            );
        }
    }
    None
}

/// The conjunctive alternatives replacing a literal, each a disjunction.
fn expand_literal(lit: &Literal, opts: ExtOptions, namer: &mut Namer) -> Option<Vec<Vec<Literal>>> {
    let a = &lit.atom;
    let p = lit.positive;
    let (head, args) = a.spine();
    let name = match head.node() {
        Node::Const(n, _) => n.as_ref(),
        _ => return None,
    };
    let l = |t: &Term, pol: bool| Literal::new(t.clone(), pol);
    Some(match (name, args.len()) {
        (logic::NOT, 1) => vec![vec![l(args[0], !p)]],
        (logic::AND, 2) => {
            if p {
                vec![vec![l(args[0], true)], vec![l(args[1], true)]]
            } else {
                vec![vec![l(args[0], false), l(args[1], false)]]
            }
        }
        (logic::OR, 2) => {
            if p {
                vec![vec![l(args[0], true), l(args[1], true)]]
            } else {
                vec![vec![l(args[0], false)], vec![l(args[1], false)]]
            }
        }
        (logic::IMP, 2) => {
            if p {
                vec![vec![l(args[0], false), l(args[1], true)]]
            } else {
                vec![vec![l(args[0], true)], vec![l(args[1], false)]]
            }
        }
        (logic::IFF, 2) => iff_parts(args[0], args[1], p),
        (logic::FORALL | logic::EXISTS, 1) => {
            let universal = (name == logic::FORALL) == p;
            let elem = args[0].ty().domain().cloned().expect("quantifier over predicate");
            let witness = if universal {
                namer.fresh_var(elem)
            } else {
                let mut deps = Vec::new();
                a.free_var_list(&mut deps);
                namer.skolem_term(&deps, elem)
            };
            let body = beta_normalize(&Term::app(args[0].clone(), witness));
            vec![vec![l(&body, p)]]
        }
        (logic::EQ, 2) => {
            let ty = args[0].ty();
            if ty == Type::O && opts.boolean_ext {
                iff_parts(args[0], args[1], p)
            } else if ty.is_fun() && opts.functional_ext {
                let dom = ty.domain().cloned().expect("function type");
                let arg = if p {
                    namer.fresh_var(dom)
                } else {
                    let mut deps = Vec::new();
                    a.free_var_list(&mut deps);
                    namer.skolem_term(&deps, dom)
                };
                let lhs = beta_normalize(&Term::app(args[0].clone(), arg.clone()));
                let rhs = beta_normalize(&Term::app(args[1].clone(), arg));
                vec![vec![Literal::new(Term::eq(lhs, rhs), p)]]
            } else {
                return None;
            }
        }
        _ => return None,
    })
}

fn iff_parts(a: &Term, b: &Term, p: bool) -> Vec<Vec<Literal>> {
    let l = |t: &Term, pol: bool| Literal::new(t.clone(), pol);
    if p {
        vec![vec![l(a, false), l(b, true)], vec![l(a, true), l(b, false)]]
    } else {
        vec![vec![l(a, true), l(b, true)], vec![l(a, false), l(b, false)]]
    }
}

/// Outer Skolemization of a closed formula under the given polarity:
/// essentially existential quantifiers reachable through the connectives
/// are replaced by Skolem terms over the enclosing universals. The result
/// is in βη-normal form.
pub fn skolemize(f: &Term, positive: bool, namer: &mut Namer) -> Term {
    let mut scope = Vec::new();
    beta_normalize(&skolem_rec(&beta_normalize(f), positive, &mut scope, namer))
}

/// `scope` holds the types of enclosing universal binders, outermost first.
fn skolem_rec(f: &Term, p: bool, scope: &mut Vec<Type>, namer: &mut Namer) -> Term {
    let (head, args) = f.spine();
    let name = match head.node() {
        Node::Const(n, _) => n.clone(),
        _ => return f.clone(),
    };
    match (name.as_ref(), args.len()) {
        (logic::NOT, 1) => Term::not(skolem_rec(args[0], !p, scope, namer)),
        (logic::AND | logic::OR, 2) => Term::apps(
            head.clone(),
            [
                skolem_rec(args[0], p, scope, namer),
                skolem_rec(args[1], p, scope, namer),
            ],
        ),
        (logic::IMP, 2) => Term::imp(
            skolem_rec(args[0], !p, scope, namer),
            skolem_rec(args[1], p, scope, namer),
        ),
        (logic::FORALL | logic::EXISTS, 1) => {
            let (ty, body) = open_binder(args[0]);
            let (ty, body) = (&ty, &body);
            let universal = (name.as_ref() == logic::FORALL) == p;
            if universal {
                scope.push(ty.clone());
                let b = skolem_rec(body, p, scope, namer);
                scope.pop();
                Term::app(head.clone(), Term::abs(ty.clone(), b))
            } else {
                // Skolem function over the enclosing universals, which are
                // loose bound variables here; free variables count too.
                let mut frees = Vec::new();
                f.free_var_list(&mut frees);
                let n = scope.len();
                let mut arg_tys: Vec<Type> = frees.iter().map(|v| v.ty.clone()).collect();
                arg_tys.extend(scope.iter().cloned());
                let fty = Type::curried(arg_tys, ty.clone());
                let sk = namer.skolem_const(fty);
                let mut t = Term::apps(sk, frees.iter().map(Var::term));
                for (i, sty) in scope.iter().enumerate() {
                    t = Term::app(t, Term::bound((n - 1 - i) as u32, sty.clone()));
                }
                let inst = body.instantiate(&t);
                skolem_rec(&inst, p, scope, namer)
            }
        }
        _ => f.clone(),
    }
}

/// Binder type and body of a predicate, η-expanding if it is not an
/// abstraction.
pub fn open_binder(pred: &Term) -> (Type, Term) {
    match pred.node() {
        Node::Abs(ty, body) => (ty.clone(), body.clone()),
        _ => {
            let ty = pred.ty().domain().cloned().expect("predicate type");
            (ty.clone(), Term::app(pred.shift(1, 0), Term::bound(0, ty)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_problem;
    use std::path::Path;

    fn clauses(src: &str) -> Vec<Clause> {
        let p = parse_problem(src, Path::new(".")).unwrap();
        clausify(&p, ExtOptions::default(), &mut Namer::new())
    }

    fn strings(cs: &[Clause]) -> Vec<String> {
        cs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn excluded_middle_conjecture() {
        let cs = clauses("thf(p_t, type, p: $o).\nthf(c, conjecture, p | ~ p).");
        let s = strings(&cs);
        assert_eq!(s.len(), 2);
        assert!(s.contains(&"[p]^ff".to_string()), "{s:?}");
        assert!(s.contains(&"[p]^tt".to_string()), "{s:?}");
        assert!(cs.iter().all(|c| c.origin.from_conjecture));
    }

    #[test]
    fn choice_axiom_clause_shape() {
        let cs = clauses("thf(ac, axiom, ?[E:(($i>$o)>$i)]: ![P:($i>$o)]: ((?[X:$i]: (P@X)) => (P @ (E@P)))).");
        assert_eq!(strings(&cs), ["[(X0 @ (sk0 @ X0))]^tt ∨ [(X0 @ X1)]^ff"]);
    }

    #[test]
    fn conjunction_split() {
        let cs = clauses("fof(a, axiom, ![X]: (p(X) & q(X))).");
        assert_eq!(strings(&cs), ["[(p @ X0)]^tt", "[(q @ X0)]^tt"]);
    }

    #[test]
    fn boolean_and_functional_extensionality() {
        let cs = clauses("thf(f_t, type, f: $i>$i).\nthf(g_t, type, g: $i>$i).\nthf(c, conjecture, f = g).");
        assert_eq!(strings(&cs), ["[(f @ sk0) = (g @ sk0)]^ff"]);
        let cs = clauses("thf(p_t, type, p: $o).\nthf(q_t, type, q: $o).\nthf(a, axiom, p = q).");
        assert_eq!(strings(&cs).len(), 2);
    }

    #[test]
    fn definitions_unfold() {
        let p = parse_problem(
            "thf(a_t, type, a: $i).\nthf(b_t, type, b: $i).\nthf(l_t, type, leq: $i>$i>$o).\nthf(d, definition, leq = (^[X:$i,Y:$i]: ![P:$i>$o]: ((P@X) => (P@Y)))).\nthf(h, axiom, leq @ a @ b).",
            Path::new("."),
        )
        .unwrap();
        let fs = unfold_definitions(&p.formulas);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].formula.to_string(), "![Z0:($i>$o)]: ((Z0 @ a) => (Z0 @ b))");
    }

    #[test]
    fn skolemize_examples() {
        let p = parse_problem(
            "fof(a, axiom, ?[X]: p(X)).\nfof(b, axiom, ![Y]: ?[X]: r(Y, X)).",
            Path::new("."),
        )
        .unwrap();
        let mut n = Namer::new();
        assert_eq!(skolemize(&p.formulas[0].formula, true, &mut n).to_string(), "(p @ sk0)");
        assert_eq!(
            skolemize(&p.formulas[1].formula, true, &mut n).to_string(),
            "![Z0:$i]: (r @ Z0 @ (sk1 @ Z0))"
        );
        assert_eq!(n.introduced.len(), 2);
        assert_eq!(n.introduced[1].1, Type::fun(Type::Iota, Type::Iota));
    }
}

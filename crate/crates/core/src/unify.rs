//! Huet-style preunification with βη, Boolean-extensional deferral and a
//! depth bound on binding generation.
//!
//! Pairs are kept under an explicit binder context, so sides may contain
//! loose bound variables that act as local rigid symbols. Flex-flex pairs
//! are returned as residual constraints, never guessed.

use crate::clausify::Namer;
use crate::term::{beta_normalize, Node, Substitution, Term, Type, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnifyOptions {
    pub boolean_ext: bool,
    pub functional_ext: bool,
    /// Maximal number of imitation/projection steps per branch.
    pub max_depth: usize,
    /// Stop after this many solutions.
    pub max_solutions: usize,
    /// Total work budget (processed pairs) per call.
    pub max_steps: usize,
}

impl Default for UnifyOptions {
    fn default() -> Self {
        UnifyOptions {
            boolean_ext: true,
            functional_ext: true,
            max_depth: 3,
            max_solutions: 16,
            max_steps: 20_000,
        }
    }
}

/// One preunifier.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub subst: Substitution,
    /// Residual flex-flex pairs, closed over their binder context.
    pub flex_flex: Vec<(Term, Term)>,
    /// Rigid mismatches at type `$o` left to the calculus as equivalences.
    pub deferred: Vec<(Term, Term)>,
}

#[derive(Clone, Debug, Default)]
pub struct UnifyResult {
    pub solutions: Vec<Solution>,
    /// Some branch was cut by the depth bound or the work budget, so an
    /// empty solution list is not a definite failure.
    pub depth_exhausted: bool,
}

#[derive(Clone)]
struct Pair {
    /// Binder types, innermost last.
    ctx: Vec<Type>,
    s: Term,
    t: Term,
}

#[derive(Clone)]
struct Branch {
    pairs: Vec<Pair>,
    subst: Substitution,
    deferred: Vec<(Term, Term)>,
    depth: usize,
}

/// Preunifies all pairs simultaneously.
pub fn preunify(constraints: &[(Term, Term)], opts: &UnifyOptions, namer: &mut Namer) -> UnifyResult {
    let mut result = UnifyResult::default();
    let mut pairs = Vec::new();
    for (s, t) in constraints {
        if s.ty() != t.ty() {
            return result;
        }
        pairs.push(Pair {
            ctx: Vec::new(),
            s: beta_normalize(s),
            t: beta_normalize(t),
        });
    }
    let mut stack = vec![Branch {
        pairs,
        subst: Substitution::new(),
        deferred: Vec::new(),
        depth: 0,
    }];
    let mut steps = 0usize;
    while let Some(mut br) = stack.pop() {
        if result.solutions.len() >= opts.max_solutions {
            break;
        }
        steps += 1;
        if steps > opts.max_steps {
            result.depth_exhausted = true;
            break;
        }
        match simplify(&mut br, opts) {
            Step::Fail => continue,
            Step::Done => {
                let flex_flex = br.pairs.iter().map(close).collect();
                let deferred = br
                    .deferred
                    .iter()
                    .map(|(s, t)| (br.subst.apply(s), br.subst.apply(t)))
                    .collect();
                let sol = Solution {
                    subst: br.subst,
                    flex_flex,
                    deferred,
                };
                if !result.solutions.contains(&sol) {
                    result.solutions.push(sol);
                }
            }
            Step::Branch(i) => {
                let p = br.pairs[i].clone();
                let bindings = huet_bindings(&p, namer);
                if br.depth >= opts.max_depth {
                    if !bindings.is_empty() {
                        result.depth_exhausted = true;
                    }
                    continue;
                }
                // Reverse so the first binding is explored first.
                for (var, b) in bindings.into_iter().rev() {
                    let mut nb = br.clone();
                    nb.depth += 1;
                    bind(&mut nb, &var, b);
                    stack.push(nb);
                }
            }
        }
    }
    result
}

enum Step {
    Fail,
    /// Only flex-flex pairs remain.
    Done,
    /// A flex-rigid pair at this index needs binding generation.
    Branch(usize),
}

/// Applies all deterministic transformations; stops at a branching point.
fn simplify(br: &mut Branch, opts: &UnifyOptions) -> Step {
    loop {
        // Pick a pair that is not flex-flex, preferring rigid-rigid and
        // directly bindable ones.
        let mut pick: Option<(usize, u8)> = None;
        let mut i = 0;
        while i < br.pairs.len() {
            let p = &mut br.pairs[i];
            if p.s == p.t {
                br.pairs.swap_remove(i);
                continue;
            }
            // a bare variable is bound whole, before η-expansion gives it arguments
            if !(bare_bindable(&p.s, &p.t) || bare_bindable(&p.t, &p.s)) {
                eta_to_base(p);
            }
            if p.s == p.t {
                br.pairs.swap_remove(i);
                continue;
            }
            let fs = is_flex_body(&p.s);
            let ft = is_flex_body(&p.t);
            let rank = match (fs, ft) {
                (false, false) => 0,
                _ if bare_bindable(&p.s, &p.t) || bare_bindable(&p.t, &p.s) => 1,
                (true, true) => 9,
                _ => 2,
            };
            if pick.is_none_or(|(_, r)| rank < r) {
                pick = Some((i, rank));
            }
            i += 1;
        }
        let Some((i, rank)) = pick else {
            return Step::Done;
        };
        match rank {
            9 => return Step::Done,
            0 => {
                let p = br.pairs.swap_remove(i);
                let (hs, as_) = p.s.spine();
                let (ht, at) = p.t.spine();
                if hs == ht && as_.len() == at.len() {
                    for (a, b) in as_.into_iter().zip(at) {
                        br.pairs.push(Pair {
                            ctx: p.ctx.clone(),
                            s: a.clone(),
                            t: b.clone(),
                        });
                    }
                } else if p.s.ty() == Type::O && opts.boolean_ext && (p.ctx.is_empty() || opts.functional_ext) {
                    let (s, t) = close(&p);
                    br.deferred.push((s, t));
                } else {
                    return Step::Fail;
                }
            }
            1 => {
                let p = br.pairs.swap_remove(i);
                let (var, val) = if bare_bindable(&p.s, &p.t) {
                    (p.s.clone(), p.t.clone())
                } else {
                    (p.t.clone(), p.s.clone())
                };
                let (n, ty) = var.as_free().expect("bare variable");
                bind(br, &Var::new(n.clone(), ty.clone()), val);
            }
            _ => return Step::Branch(i),
        }
    }
}

/// `var` is a free variable without arguments that can be bound to `val`:
/// it does not occur in `val` and `val` has no loose bound variables.
fn bare_bindable(var: &Term, val: &Term) -> bool {
    match var.as_free() {
        Some((n, _)) => !val.has_free(n) && !val.has_loose_bvars(),
        None => false,
    }
}

fn is_flex_body(t: &Term) -> bool {
    matches!(t.head().node(), Node::Free(..))
}

fn bind(br: &mut Branch, var: &Var, val: Term) {
    let single = Substitution::single(var, val).expect("well-typed binding");
    for p in &mut br.pairs {
        p.s = single.apply(&p.s);
        p.t = single.apply(&p.t);
    }
    br.subst = br.subst.compose(&single);
}

/// η-expands both sides until the pair is at a base type.
fn eta_to_base(p: &mut Pair) {
    while let Type::Fun(d, _) = p.s.ty() {
        let d = d.as_ref().clone();
        p.s = open_abs(&p.s, &d);
        p.t = open_abs(&p.t, &d);
        p.ctx.push(d);
    }
}

fn open_abs(t: &Term, d: &Type) -> Term {
    match t.node() {
        Node::Abs(_, b) => b.clone(),
        _ => beta_normalize(&Term::app(t.shift(1, 0), Term::bound(0, d.clone()))),
    }
}

/// Re-abstracts a pair over its context.
fn close(p: &Pair) -> (Term, Term) {
    let wrap = |t: &Term| {
        let mut t = t.clone();
        for ty in p.ctx.iter().rev() {
            t = Term::abs(ty.clone(), t);
        }
        beta_normalize(&t)
    };
    (wrap(&p.s), wrap(&p.t))
}

/// Imitation and projection bindings for the flex head of a flex-rigid pair.
fn huet_bindings(p: &Pair, namer: &mut Namer) -> Vec<(Var, Term)> {
    let (flex, rigid) = if is_flex_body(&p.s) { (&p.s, &p.t) } else { (&p.t, &p.s) };
    let (fname, fty) = flex.head().as_free().expect("flex head");
    let var = Var::new(fname.clone(), fty.clone());
    let (arg_tys, target) = fty.split();
    let n = arg_tys.len();
    let mut out = Vec::new();

    let rigid_head = rigid.head();
    if let Node::Const(..) = rigid_head.node() {
        let b = partial_binding(rigid_head.clone(), &arg_tys, namer);
        out.push((var.clone(), b));
    }
    for (i, aty) in arg_tys.iter().enumerate() {
        if aty.target() == &target {
            let x = Term::bound((n - 1 - i) as u32, aty.clone());
            let b = partial_binding(x, &arg_tys, namer);
            out.push((var.clone(), b));
        }
    }
    out
}

/// `λx1..xn. h (H1 x̄) .. (Hm x̄)` with fresh `Hj`. `h` is either closed or
/// one of the `xi`, written as a bound index relative to the body.
pub(crate) fn partial_binding(h: Term, arg_tys: &[Type], namer: &mut Namer) -> Term {
    let n = arg_tys.len();
    let (x_args, _) = h.ty().split();
    let mut body = h;
    for hty in x_args {
        let h = namer.fresh_var_named("H", Type::curried(arg_tys.to_vec(), hty));
        let applied = Term::apps(
            h.term(),
            (0..n).map(|i| Term::bound((n - 1 - i) as u32, arg_tys[i].clone())),
        );
        body = Term::app(body, applied);
    }
    for ty in arg_tys.iter().rev() {
        body = Term::abs(ty.clone(), body);
    }
    body
}

/// Convenience: are two terms unifiable (some preunifier exists)?
pub fn unifiable(s: &Term, t: &Term, opts: &UnifyOptions, namer: &mut Namer) -> bool {
    !preunify(&[(s.clone(), t.clone())], opts, namer).solutions.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Type {
        Type::Iota
    }

    fn opts(depth: usize) -> UnifyOptions {
        UnifyOptions {
            max_depth: depth,
            ..UnifyOptions::default()
        }
    }

    #[test]
    fn identical_constants() {
        let c = Term::constant("c", i());
        let r = preunify(&[(c.clone(), c)], &opts(2), &mut Namer::new());
        assert_eq!(r.solutions.len(), 1);
        assert!(r.solutions[0].subst.is_empty());
    }

    #[test]
    fn bare_functional_variables_are_bound_without_search() {
        // F ≟ G at type ι→ι is solved by F := G, even at depth 0
        let f = Term::free("F", Type::fun(i(), i()));
        let g = Term::free("G", Type::fun(i(), i()));
        let r = preunify(&[(f.clone(), g.clone())], &opts(0), &mut Namer::new());
        assert_eq!(r.solutions.len(), 1);
        let s = &r.solutions[0];
        assert!(s.flex_flex.is_empty());
        assert_eq!(s.subst.apply(&f), s.subst.apply(&g));
    }

    #[test]
    fn flex_rigid_imitation_and_projection() {
        // F c ≟ g c
        let c = Term::constant("c", i());
        let g = Term::constant("g", Type::fun(i(), i()));
        let f = Var::new("F", Type::fun(i(), i()));
        let lhs = Term::app(f.term(), c.clone());
        let rhs = Term::app(g.clone(), c.clone());
        let r = preunify(&[(lhs.clone(), rhs.clone())], &opts(2), &mut Namer::new());
        let mut got: Vec<String> = r
            .solutions
            .iter()
            .map(|s| s.subst.get("F").unwrap().to_string())
            .collect();
        got.sort();
        assert_eq!(got, ["^[Z0:$i]: (g @ c)", "g"]);
        for s in &r.solutions {
            assert_eq!(s.subst.apply(&lhs), s.subst.apply(&rhs));
        }
        // one step is not enough for F ↦ λx. g c, which needs two bindings
        let r1 = preunify(&[(lhs, rhs)], &opts(1), &mut Namer::new());
        assert!(r1.solutions.is_empty());
        assert!(r1.depth_exhausted);
    }

    #[test]
    fn eta_pair() {
        let p = Term::constant("p", Type::predicate(i()));
        let lam = Term::abs(i(), Term::app(p.clone(), Term::bound(0, i())));
        let r = preunify(&[(lam, p)], &opts(0), &mut Namer::new());
        assert_eq!(r.solutions.len(), 1);
    }

    #[test]
    fn first_order_mgu() {
        // f(X, a) ≟ f(b, Y)
        let f = Term::constant("f", Type::curried([i(), i()], i()));
        let a = Term::constant("a", i());
        let b = Term::constant("b", i());
        let x = Term::free("X", i());
        let y = Term::free("Y", i());
        let s = Term::apps(f.clone(), [x, a.clone()]);
        let t = Term::apps(f, [b.clone(), y]);
        let r = preunify(&[(s, t)], &opts(0), &mut Namer::new());
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].subst.get("X"), Some(&b));
        assert_eq!(r.solutions[0].subst.get("Y"), Some(&a));
    }

    #[test]
    fn occurs_check_and_clash() {
        let f = Term::constant("f", Type::fun(i(), i()));
        let x = Term::free("X", i());
        let r = preunify(&[(x.clone(), Term::app(f, x))], &opts(0), &mut Namer::new());
        assert!(r.solutions.is_empty());
        let a = Term::constant("a", i());
        let b = Term::constant("b", i());
        let r = preunify(&[(a, b)], &opts(3), &mut Namer::new());
        assert!(r.solutions.is_empty());
        assert!(!r.depth_exhausted);
    }

    #[test]
    fn flex_flex_is_residual() {
        let f = Term::free("F", Type::fun(i(), i()));
        let g = Term::free("G", Type::fun(i(), i()));
        let a = Term::constant("a", i());
        let r = preunify(
            &[(Term::app(f, a.clone()), Term::app(g, a))],
            &opts(2),
            &mut Namer::new(),
        );
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].flex_flex.len(), 1);
    }

    #[test]
    fn boolean_mismatch_deferred() {
        let p = Term::constant("p", Type::O);
        let q = Term::constant("q", Type::O);
        let r = preunify(&[(p.clone(), q.clone())], &opts(1), &mut Namer::new());
        assert_eq!(r.solutions.len(), 1);
        assert_eq!(r.solutions[0].deferred, vec![(p.clone(), q.clone())]);
        let off = UnifyOptions {
            boolean_ext: false,
            ..opts(1)
        };
        assert!(preunify(&[(p, q)], &off, &mut Namer::new()).solutions.is_empty());
    }
}

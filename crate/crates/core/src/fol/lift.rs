//! λ-lifting: every maximal λ-prefix is replaced by a fresh symbol applied
//! to the variables it captures, innermost abstractions first, so the
//! defining equations are themselves λ-free.

use std::collections::HashMap;

use crate::clause::{Clause, Literal, Origin};
use crate::term::{beta_normalize, logic, Fresh, Name, Node, Term, Type, Var};

/// Name prefix of lifted symbols; reserved in input.
pub const LIFT_PREFIX: &str = "leoLift";

/// Lifting state shared across the terms of one problem, so that equal
/// abstractions share one symbol.
#[derive(Debug, Default)]
pub struct Lifter {
    fresh: Fresh,
    binders: Fresh,
    memo: HashMap<Term, Name>,
    /// Every lifted symbol with its type, in creation order.
    pub symbols: Vec<(Name, Type)>,
}

impl Lifter {
    pub fn new() -> Lifter {
        Lifter::default()
    }

    /// Keeps future lifted names clear of the given symbols.
    pub fn avoid<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        self.fresh.avoid(LIFT_PREFIX, names);
    }
}

/// Lifts all abstractions out of `t`. Returns the λ-free term and the
/// defining clauses `[leoLift<N> ȳ x̄ = b]^tt` of newly created symbols.
pub fn lambda_lift(t: &Term, lifter: &mut Lifter) -> (Term, Vec<Clause>) {
    let mut defs = Vec::new();
    let out = go(&beta_normalize(t), lifter, &mut defs);
    (out, defs)
}

/// Lifts the atoms of a formula, leaving formula-level connectives and
/// binders in place.
pub fn lift_formula(f: &Term, lifter: &mut Lifter) -> (Term, Vec<Clause>) {
    let mut defs = Vec::new();
    let out = formula(&beta_normalize(f), lifter, &mut defs);
    (out, defs)
}

fn formula(f: &Term, lifter: &mut Lifter, defs: &mut Vec<Clause>) -> Term {
    let (h, args) = f.spine();
    let logical = matches!(h.node(), Node::Const(n, _) if logic::is_logical(n));
    if !logical || f.as_eq().is_some_and(|(l, _)| l.ty() != Type::O) {
        return go(f, lifter, defs);
    }
    let quant = h.is_const_named(logic::FORALL) || h.is_const_named(logic::EXISTS);
    let args: Vec<Term> = args
        .into_iter()
        .map(|a| match a.node() {
            Node::Abs(ty, body) if quant => {
                let v = Var::new(lifter.binders.name("#Q"), ty.clone());
                let inner = formula(&body.instantiate(&v.term()), lifter, defs);
                Term::lambda(&v, &inner)
            }
            _ if quant => go(a, lifter, defs),
            _ => formula(a, lifter, defs),
        })
        .collect();
    Term::apps(h.clone(), args)
}

fn go(t: &Term, lifter: &mut Lifter, defs: &mut Vec<Clause>) -> Term {
    match t.node() {
        Node::App(f, a) => Term::app(go(f, lifter, defs), go(a, lifter, defs)),
        Node::Abs(..) => {
            let mut binders = Vec::new();
            let mut body = t;
            while let Node::Abs(ty, b) = body.node() {
                binders.push(ty.clone());
                body = b;
            }
            let body = go(body, lifter, defs);
            lift_abstraction(&binders, &body, lifter, defs)
        }
        _ => t.clone(),
    }
}

/// `binders` are the λ-prefix (outermost first) around the already lifted
/// `body`. Loose indices of `body` at or above `binders.len()` refer to
/// enclosing binders and become parameters.
fn lift_abstraction(binders: &[Type], body: &Term, lifter: &mut Lifter, defs: &mut Vec<Clause>) -> Term {
    let k = binders.len() as u32;
    let mut outer: Vec<(u32, Type)> = Vec::new();
    collect_loose(body, k, 0, &mut outer);
    // outermost enclosing binder first
    outer.sort_by_key(|x| std::cmp::Reverse(x.0));
    outer.dedup_by(|a, b| a.0 == b.0);

    let outer_vars: Vec<Var> = outer
        .iter()
        .map(|(j, ty)| Var::new(format!("#L{j}"), ty.clone()))
        .collect();
    let local_vars: Vec<Var> = binders
        .iter()
        .enumerate()
        .map(|(i, ty)| Var::new(format!("#Z{i}"), ty.clone()))
        .collect();
    // body with every loose index replaced by its named variable
    let open = replace_loose(body, 0, &|idx| {
        if idx < k {
            Some(local_vars[(k - 1 - idx) as usize].term())
        } else {
            outer
                .iter()
                .position(|(j, _)| *j == idx - k)
                .map(|p| outer_vars[p].term())
        }
    });
    let mut free = Vec::new();
    open.free_var_list(&mut free);
    free.retain(|v| !v.name.starts_with('#'));

    let params: Vec<Var> = free.iter().chain(&outer_vars).cloned().collect();
    let mut closed = open.clone();
    for v in params.iter().chain(&local_vars).rev() {
        closed = Term::lambda(v, &closed);
    }
    let name = match lifter.memo.get(&closed) {
        Some(n) => n.clone(),
        None => {
            let n = lifter.fresh.name(LIFT_PREFIX);
            let ty = closed.ty();
            lifter.memo.insert(closed.clone(), n.clone());
            lifter.symbols.push((n.clone(), ty.clone()));
            let lhs = Term::apps(
                Term::constant(n.clone(), ty),
                params.iter().chain(&local_vars).map(Var::term),
            );
            let eq = Term::eq(lhs, open);
            let origin = Origin::new("lambda_lift", &[]).with_note(n.to_string());
            if let Some(c) = Clause::new(vec![Literal::pos(eq)], vec![], origin) {
                defs.push(c);
            }
            n
        }
    };
    let head = Term::constant(name, closed.ty());
    Term::apps(
        head,
        free.iter()
            .map(Var::term)
            .chain(outer.iter().map(|(j, ty)| Term::bound(*j, ty.clone()))),
    )
}

/// Loose indices of `t` at least `k`, shifted down by `k`, with their types.
fn collect_loose(t: &Term, k: u32, depth: u32, out: &mut Vec<(u32, Type)>) {
    match t.node() {
        Node::Bound(i, ty) if *i >= depth + k => out.push((i - depth - k, ty.clone())),
        Node::Abs(_, b) => collect_loose(b, k, depth + 1, out),
        Node::App(f, a) => {
            collect_loose(f, k, depth, out);
            collect_loose(a, k, depth, out);
        }
        _ => {}
    }
}

fn replace_loose(t: &Term, depth: u32, f: &dyn Fn(u32) -> Option<Term>) -> Term {
    match t.node() {
        Node::Bound(i, _) if *i >= depth => f(i - depth).unwrap_or_else(|| t.clone()),
        Node::Abs(ty, b) => Term::abs(ty.clone(), replace_loose(b, depth + 1, f)),
        Node::App(g, a) => Term::app(replace_loose(g, depth, f), replace_loose(a, depth, f)),
        _ => t.clone(),
    }
}

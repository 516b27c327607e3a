//! The bundled first-order backend: binary resolution and factoring with
//! equality axioms, run as a given-clause loop.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use super::cnf::{cnf, FoAtom, FoClause, FoLit};
use super::syntax::{sort_of, FoFormula, FoProblem, FoRole, FoTerm, FoVar};
use super::FolError;
use crate::clausify::open_binder;
use crate::term::{beta_normalize, logic, Fresh, Name, Node, Term, Type};
use crate::tptp::{Problem, Role};

pub type Subst = BTreeMap<Name, FoTerm>;

fn apply(t: &FoTerm, s: &Subst) -> FoTerm {
    match t {
        FoTerm::Var(v) => match s.get(v) {
            Some(u) => apply(u, s),
            None => t.clone(),
        },
        FoTerm::Fn(f, a) => FoTerm::Fn(f.clone(), a.iter().map(|x| apply(x, s)).collect()),
    }
}

fn occurs(v: &str, t: &FoTerm, s: &Subst) -> bool {
    match t {
        FoTerm::Var(w) => w.as_ref() == v || s.get(w).is_some_and(|u| occurs(v, u, s)),
        FoTerm::Fn(_, a) => a.iter().any(|x| occurs(v, x, s)),
    }
}

fn unify_into(a: &FoTerm, b: &FoTerm, s: &mut Subst) -> bool {
    match (a, b) {
        (FoTerm::Var(v), _) if s.contains_key(v) => {
            let t = s[v].clone();
            unify_into(&t, b, s)
        }
        (_, FoTerm::Var(w)) if s.contains_key(w) => {
            let t = s[w].clone();
            unify_into(a, &t, s)
        }
        (FoTerm::Var(v), FoTerm::Var(w)) if v == w => true,
        (FoTerm::Var(v), t) | (t, FoTerm::Var(v)) => {
            if occurs(v, t, s) {
                false
            } else {
                s.insert(v.clone(), t.clone());
                true
            }
        }
        (FoTerm::Fn(f, xs), FoTerm::Fn(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_into(x, y, s))
        }
    }
}

/// Most general unifier of all pairs (Robinson with occurs check), in
/// idempotent form.
pub fn mgu(pairs: &[(FoTerm, FoTerm)]) -> Option<Subst> {
    let mut s = Subst::new();
    for (a, b) in pairs {
        if !unify_into(a, b, &mut s) {
            return None;
        }
    }
    let keys: Vec<Name> = s.keys().cloned().collect();
    Some(
        keys.into_iter()
            .map(|k| (k.clone(), apply(&FoTerm::Var(k), &s)))
            .collect(),
    )
}

#[derive(Clone, Debug)]
pub struct ProverLimits {
    pub timeout: Duration,
    pub max_clauses: usize,
    /// Generated clauses heavier than this are discarded, which forfeits a
    /// saturation verdict.
    pub max_weight: usize,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits {
            timeout: Duration::from_secs(10),
            max_clauses: 50_000,
            max_weight: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoResult {
    Unsatisfiable,
    /// The clause set saturated without discarding anything.
    Satisfiable,
    GaveUp,
    Timeout,
}

type Lits = Vec<FoLit>;

fn map_atom(a: &FoAtom, f: &dyn Fn(&FoTerm) -> FoTerm) -> FoAtom {
    match a {
        FoAtom::Pred(p, xs) => FoAtom::Pred(p.clone(), xs.iter().map(f).collect()),
        FoAtom::Eq(x, y) => FoAtom::Eq(f(x), f(y)),
    }
}

fn subst_lits(ls: &[FoLit], s: &Subst) -> Lits {
    ls.iter()
        .map(|l| FoLit {
            positive: l.positive,
            atom: map_atom(&l.atom, &|t| apply(t, s)),
        })
        .collect()
}

fn rename(ls: &[FoLit], prefix: &str) -> Lits {
    let mut names: BTreeMap<Name, FoTerm> = BTreeMap::new();
    let mut order = Vec::new();
    for l in ls {
        for a in l.atom.args() {
            collect_vars_ordered(a, &mut order);
        }
    }
    for v in order {
        let k = names.len();
        names.entry(v).or_insert_with(|| FoTerm::var(format!("{prefix}{k}")));
    }
    ls.iter()
        .map(|l| FoLit {
            positive: l.positive,
            atom: map_atom(&l.atom, &|t| rename_term(t, &names)),
        })
        .collect()
}

/// Simultaneous, non-recursive renaming.
fn rename_term(t: &FoTerm, names: &BTreeMap<Name, FoTerm>) -> FoTerm {
    match t {
        FoTerm::Var(v) => names[v].clone(),
        FoTerm::Fn(f, a) => FoTerm::Fn(f.clone(), a.iter().map(|x| rename_term(x, names)).collect()),
    }
}

fn collect_vars_ordered(t: &FoTerm, out: &mut Vec<Name>) {
    match t {
        FoTerm::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        FoTerm::Fn(_, a) => a.iter().for_each(|x| collect_vars_ordered(x, out)),
    }
}

fn unify_atoms(a: &FoAtom, b: &FoAtom) -> Option<Subst> {
    match (a, b) {
        (FoAtom::Pred(p, xs), FoAtom::Pred(q, ys)) if p == q && xs.len() == ys.len() => {
            let pairs: Vec<_> = xs.iter().cloned().zip(ys.iter().cloned()).collect();
            mgu(&pairs)
        }
        (FoAtom::Eq(x1, y1), FoAtom::Eq(x2, y2)) => mgu(&[(x1.clone(), x2.clone()), (y1.clone(), y2.clone())]),
        _ => None,
    }
}

/// Normalizes literal order and variable names, drops duplicates and
/// trivial equations. `None` for tautologies.
fn simplify(ls: Lits) -> Option<Lits> {
    let mut out: Lits = Vec::new();
    for l in ls {
        if let FoAtom::Eq(a, b) = &l.atom {
            if a == b {
                if l.positive {
                    return None;
                }
                continue;
            }
        }
        if out.iter().any(|m| m.atom == l.atom && m.positive != l.positive) {
            return None;
        }
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out.sort_by_key(|l| (l.positive, weight_lit(l)));
    Some(rename(&out, "X"))
}

fn weight_term(t: &FoTerm) -> usize {
    t.size()
}

fn weight_lit(l: &FoLit) -> usize {
    1 + l.atom.args().iter().map(|a| weight_term(a)).sum::<usize>()
}

fn weight(ls: &[FoLit]) -> usize {
    ls.iter().map(weight_lit).sum()
}

/// θ-subsumption: some substitution maps `c` into a sub-multiset of `d`.
fn subsumes(c: &[FoLit], d: &[FoLit]) -> bool {
    fn matches(p: &FoTerm, t: &FoTerm, s: &mut Subst) -> bool {
        match (p, t) {
            (FoTerm::Var(v), _) => match s.get(v) {
                Some(u) => u == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    true
                }
            },
            (FoTerm::Fn(f, xs), FoTerm::Fn(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| matches(x, y, s))
            }
            _ => false,
        }
    }
    fn go(c: &[FoLit], d: &[FoLit], used: &mut Vec<bool>, s: &Subst) -> bool {
        let Some((l, rest)) = c.split_first() else {
            return true;
        };
        for (k, m) in d.iter().enumerate() {
            if used[k] || m.positive != l.positive {
                continue;
            }
            let mut s2 = s.clone();
            let ok = match (&l.atom, &m.atom) {
                (FoAtom::Pred(p, xs), FoAtom::Pred(q, ys)) => {
                    p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| matches(x, y, &mut s2))
                }
                (FoAtom::Eq(a, b), FoAtom::Eq(x, y)) => {
                    let mut s3 = s.clone();
                    if matches(a, x, &mut s2) && matches(b, y, &mut s2) {
                        true
                    } else if matches(a, y, &mut s3) && matches(b, x, &mut s3) {
                        s2 = s3;
                        true
                    } else {
                        false
                    }
                }
                _ => false,
            };
            if ok {
                used[k] = true;
                if go(rest, d, used, &s2) {
                    return true;
                }
                used[k] = false;
            }
        }
        false
    }
    c.len() <= d.len() && go(c, d, &mut vec![false; d.len()], &Subst::new())
}

fn equality_axioms(clauses: &[Lits]) -> Vec<Lits> {
    let mut funs: BTreeSet<(Name, usize)> = BTreeSet::new();
    let mut preds: BTreeSet<(Name, usize)> = BTreeSet::new();
    let mut has_eq = false;
    for c in clauses {
        for l in c {
            match &l.atom {
                FoAtom::Pred(p, a) => {
                    preds.insert((p.clone(), a.len()));
                }
                FoAtom::Eq(..) => has_eq = true,
            }
            for a in l.atom.args() {
                a.symbols(&mut funs);
            }
        }
    }
    if !has_eq {
        return Vec::new();
    }
    let v = |n: &str| FoTerm::var(n);
    let eq = |a: FoTerm, b: FoTerm, positive: bool| FoLit {
        positive,
        atom: FoAtom::Eq(a, b),
    };
    let mut out = vec![
        vec![eq(v("X"), v("X"), true)],
        vec![eq(v("X"), v("Y"), false), eq(v("Y"), v("X"), true)],
        vec![
            eq(v("X"), v("Y"), false),
            eq(v("Y"), v("Z"), false),
            eq(v("X"), v("Z"), true),
        ],
    ];
    let args = |n: usize, i: usize, x: &str| -> Vec<FoTerm> {
        (0..n)
            .map(|j| if j == i { v(x) } else { v(&format!("Z{j}")) })
            .collect()
    };
    for (f, n) in &funs {
        for i in 0..*n {
            out.push(vec![
                eq(v("X"), v("Y"), false),
                eq(
                    FoTerm::Fn(f.clone(), args(*n, i, "X")),
                    FoTerm::Fn(f.clone(), args(*n, i, "Y")),
                    true,
                ),
            ]);
        }
    }
    for (p, n) in &preds {
        for i in 0..*n {
            out.push(vec![
                eq(v("X"), v("Y"), false),
                FoLit {
                    positive: false,
                    atom: FoAtom::Pred(p.clone(), args(*n, i, "X")),
                },
                FoLit {
                    positive: true,
                    atom: FoAtom::Pred(p.clone(), args(*n, i, "Y")),
                },
            ]);
        }
    }
    out
}

struct Loop {
    clauses: Vec<Lits>,
    seen: HashSet<Lits>,
    by_weight: BTreeSet<(usize, usize)>,
    by_age: VecDeque<usize>,
    taken: Vec<bool>,
    active: Vec<usize>,
    discarded: bool,
    picks: usize,
}

impl Loop {
    fn add(&mut self, ls: Lits, limits: &ProverLimits) -> Option<usize> {
        let ls = simplify(ls)?;
        if weight(&ls) > limits.max_weight {
            self.discarded = true;
            return None;
        }
        if !self.seen.insert(ls.clone()) {
            return None;
        }
        let id = self.clauses.len();
        self.by_weight.insert((weight(&ls), id));
        self.by_age.push_back(id);
        self.clauses.push(ls);
        self.taken.push(false);
        Some(id)
    }

    fn pick(&mut self) -> Option<usize> {
        self.picks += 1;
        let id = if self.picks.is_multiple_of(5) {
            loop {
                let id = self.by_age.pop_front()?;
                if !self.taken[id] {
                    break id;
                }
            }
        } else {
            let &(w, id) = self.by_weight.iter().next()?;
            self.by_weight.remove(&(w, id));
            id
        };
        self.taken[id] = true;
        self.by_weight.remove(&(weight(&self.clauses[id]), id));
        Some(id)
    }
}

/// Runs the given-clause loop on a clause set.
pub fn prove(input: &[FoClause], limits: &ProverLimits) -> FoResult {
    let start = Instant::now();
    let mut base: Vec<Lits> = input.iter().map(|c| c.lits.clone()).collect();
    base.extend(equality_axioms(&base));
    let mut lp = Loop {
        clauses: Vec::new(),
        seen: HashSet::new(),
        by_weight: BTreeSet::new(),
        by_age: VecDeque::new(),
        taken: Vec::new(),
        active: Vec::new(),
        discarded: false,
        picks: 0,
    };
    for c in base {
        if let Some(id) = lp.add(c, limits) {
            if lp.clauses[id].is_empty() {
                return FoResult::Unsatisfiable;
            }
        }
    }
    while let Some(g) = lp.pick() {
        if start.elapsed() > limits.timeout {
            return FoResult::Timeout;
        }
        if lp.clauses.len() > limits.max_clauses {
            return FoResult::GaveUp;
        }
        let given = lp.clauses[g].clone();
        if lp.active.iter().any(|&a| subsumes(&lp.clauses[a], &given)) {
            continue;
        }
        lp.active.push(g);
        let mut new: Vec<Lits> = Vec::new();
        // factors
        for i in 0..given.len() {
            for j in i + 1..given.len() {
                if given[i].positive != given[j].positive {
                    continue;
                }
                if let Some(s) = unify_atoms(&given[i].atom, &given[j].atom) {
                    let rest: Lits = given
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, l)| l.clone())
                        .collect();
                    new.push(subst_lits(&rest, &s));
                }
            }
        }
        // resolvents with every active clause, the given one included
        let g_ren = rename(&given, "Y");
        for &a in &lp.active {
            let other = &lp.clauses[a];
            for (i, l1) in g_ren.iter().enumerate() {
                for (j, l2) in other.iter().enumerate() {
                    if l1.positive == l2.positive {
                        continue;
                    }
                    let Some(s) = unify_atoms(&l1.atom, &l2.atom) else {
                        continue;
                    };
                    let mut rest: Lits = g_ren
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, l)| l.clone())
                        .collect();
                    rest.extend(
                        other
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, l)| l.clone()),
                    );
                    new.push(subst_lits(&rest, &s));
                }
            }
        }
        for c in new {
            if let Some(id) = lp.add(c, limits) {
                if lp.clauses[id].is_empty() {
                    return FoResult::Unsatisfiable;
                }
            }
        }
    }
    if lp.discarded {
        FoResult::GaveUp
    } else {
        FoResult::Satisfiable
    }
}

/// Reads a first-order-shaped parsed problem (FOF or CNF) as a first-order
/// problem.
pub fn from_hol(p: &Problem) -> Result<FoProblem, FolError> {
    let mut out = FoProblem::default();
    let mut fresh = Fresh::new();
    for f in &p.formulas {
        let role = if f.role == Role::Conjecture {
            FoRole::Conjecture
        } else {
            FoRole::Axiom
        };
        out.push(f.name.clone(), role, hol_formula(&f.formula, &mut fresh)?);
    }
    Ok(out)
}

fn hol_formula(t: &Term, fresh: &mut Fresh) -> Result<FoFormula, FolError> {
    if t.is_const_named(logic::TRUE) {
        return Ok(FoFormula::True);
    }
    if t.is_const_named(logic::FALSE) {
        return Ok(FoFormula::False);
    }
    if let Some(a) = t.logical_args(logic::NOT, 1) {
        return Ok(FoFormula::not(hol_formula(a[0], fresh)?));
    }
    for op in [logic::AND, logic::OR, logic::IMP, logic::IFF] {
        if let Some(a) = t.logical_args(op, 2) {
            let (x, y) = (hol_formula(a[0], fresh)?, hol_formula(a[1], fresh)?);
            return Ok(match op {
                logic::AND => FoFormula::And(vec![x, y]),
                logic::OR => FoFormula::Or(vec![x, y]),
                logic::IMP => FoFormula::implies(x, y),
                _ => FoFormula::iff(x, y),
            });
        }
    }
    if let Some((l, r)) = t.as_eq() {
        if l.ty() == Type::O {
            return Ok(FoFormula::iff(hol_formula(l, fresh)?, hol_formula(r, fresh)?));
        }
        return Ok(FoFormula::Eq(hol_term(l)?, hol_term(r)?));
    }
    for (q, all) in [(logic::FORALL, true), (logic::EXISTS, false)] {
        if let Some(a) = t.logical_args(q, 1) {
            let (ty, body) = open_binder(a[0]);
            let name = fresh.name("V");
            let sort = sort_of(&ty);
            let body = beta_normalize(&body.instantiate(&Term::free(name.clone(), ty)));
            let inner = hol_formula(&body, fresh)?;
            let v = vec![FoVar::new(name, Some(sort))];
            return Ok(if all {
                FoFormula::forall(v, inner)
            } else {
                FoFormula::exists(v, inner)
            });
        }
    }
    let (h, args) = t.spine();
    match h.node() {
        Node::Const(n, _) if !logic::is_logical(n) => Ok(FoFormula::Pred(
            n.clone(),
            args.iter().map(|a| hol_term(a)).collect::<Result<_, _>>()?,
        )),
        _ => Err(FolError::NotFirstOrder(t.to_string())),
    }
}

fn hol_term(t: &Term) -> Result<FoTerm, FolError> {
    let (h, args) = t.spine();
    match h.node() {
        Node::Free(n, _) if args.is_empty() => Ok(FoTerm::Var(n.clone())),
        Node::Const(n, _) if !logic::is_logical(n) => Ok(FoTerm::Fn(
            n.clone(),
            args.iter().map(|a| hol_term(a)).collect::<Result<_, _>>()?,
        )),
        _ => Err(FolError::NotFirstOrder(t.to_string())),
    }
}

/// Convenience: clause form and proof attempt of a first-order problem.
pub fn prove_problem(p: &FoProblem, limits: &ProverLimits) -> FoResult {
    prove(&cnf(p), limits)
}

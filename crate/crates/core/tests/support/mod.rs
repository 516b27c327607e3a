//! Independent oracles and generators shared by the property tests and
//! the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use hol_core::calculus::PrimSubstMode;
use hol_core::clause::{Clause, Literal, Origin};
use hol_core::clausify::{ExtOptions, Namer};
use hol_core::fol::{mgu, FoTerm};
use hol_core::model::{find_model, Model, OracleLimits, Verdict};
use hol_core::search::ProverState;
use hol_core::term::{beta_normalize, Name, Term, Type, Var};
use hol_core::unify::{preunify, UnifyOptions};

pub fn i() -> Type {
    Type::Iota
}

// ---------------------------------------------------------------------
// First-order unification against the reference unifier

/// Function symbols of the random first-order signature with arities.
const FO_FUNS: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 3)];
const FO_VARS: [&str; 4] = ["X", "Y", "Z", "W"];

pub fn random_fo_term<R: Rng>(rng: &mut R, depth: usize) -> FoTerm {
    if depth == 0 || rng.random_bool(0.35) {
        if rng.random_bool(0.6) {
            return FoTerm::var(FO_VARS[rng.random_range(0..FO_VARS.len())]);
        }
        let (c, _) = FO_FUNS[rng.random_range(0..2)];
        return FoTerm::constant(c);
    }
    let (f, n) = FO_FUNS[rng.random_range(2..FO_FUNS.len())];
    FoTerm::app(f, (0..n).map(|_| random_fo_term(rng, depth - 1)).collect())
}

/// A random pair, biased toward unifiable ones by sometimes building the
/// second side as an instance of the first.
pub fn random_fo_pair<R: Rng>(rng: &mut R) -> (FoTerm, FoTerm) {
    let s = random_fo_term(rng, 3);
    let t = if rng.random_bool(0.5) {
        let mut sub = BTreeMap::new();
        for v in FO_VARS {
            if rng.random_bool(0.5) {
                sub.insert(v.to_string(), random_fo_term(rng, 1));
            }
        }
        fo_subst(&s, &sub)
    } else {
        random_fo_term(rng, 3)
    };
    (s, t)
}

fn fo_subst(t: &FoTerm, sub: &BTreeMap<String, FoTerm>) -> FoTerm {
    match t {
        FoTerm::Var(v) => sub.get(v.as_ref()).cloned().unwrap_or_else(|| t.clone()),
        FoTerm::Fn(f, args) => FoTerm::Fn(f.clone(), args.iter().map(|a| fo_subst(a, sub)).collect()),
    }
}

fn fo_apply(t: &FoTerm, sub: &BTreeMap<Name, FoTerm>) -> FoTerm {
    match t {
        FoTerm::Var(v) => match sub.get(v) {
            Some(u) => fo_apply(u, sub),
            None => t.clone(),
        },
        FoTerm::Fn(f, args) => FoTerm::Fn(f.clone(), args.iter().map(|a| fo_apply(a, sub)).collect()),
    }
}

pub fn fo_to_hol(t: &FoTerm) -> Term {
    match t {
        FoTerm::Var(v) => Term::free(v.clone(), i()),
        FoTerm::Fn(f, args) => {
            let ty = Type::curried(vec![i(); args.len()], i());
            Term::apps(Term::constant(f.clone(), ty), args.iter().map(fo_to_hol))
        }
    }
}

fn hol_to_fo(t: &Term) -> FoTerm {
    let (h, args) = t.spine();
    if let Some((n, _)) = h.as_free() {
        return FoTerm::Var(n.clone());
    }
    let (n, _) = h.as_const().expect("first-order term");
    FoTerm::Fn(n.clone(), args.into_iter().map(hol_to_fo).collect())
}

/// Are the two tuples equal up to a bijective renaming of variables?
fn variants(a: &[FoTerm], b: &[FoTerm]) -> bool {
    fn go(s: &FoTerm, t: &FoTerm, fwd: &mut BTreeMap<Name, Name>, bwd: &mut BTreeMap<Name, Name>) -> bool {
        match (s, t) {
            (FoTerm::Var(x), FoTerm::Var(y)) => {
                fwd.entry(x.clone()).or_insert_with(|| y.clone()) == y
                    && bwd.entry(y.clone()).or_insert_with(|| x.clone()) == x
            }
            (FoTerm::Fn(f, xs), FoTerm::Fn(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, fwd, bwd))
            }
            _ => false,
        }
    }
    let (mut fwd, mut bwd) = (BTreeMap::new(), BTreeMap::new());
    a.len() == b.len() && a.iter().zip(b).all(|(s, t)| go(s, t, &mut fwd, &mut bwd))
}

/// Compares preunification with the reference unifier on one pair:
/// same verdict, and most general unifiers equal up to renaming.
pub fn check_fo_unification(s: &FoTerm, t: &FoTerm) -> Result<(), String> {
    let reference = mgu(&[(s.clone(), t.clone())]);
    let opts = UnifyOptions {
        max_depth: 0,
        ..UnifyOptions::default()
    };
    let r = preunify(&[(fo_to_hol(s), fo_to_hol(t))], &opts, &mut Namer::new());
    let mut vars = BTreeSet::new();
    s.vars(&mut vars);
    t.vars(&mut vars);
    match (reference, r.solutions.as_slice()) {
        (None, []) => Ok(()),
        (Some(m), [sol]) => {
            if !sol.flex_flex.is_empty() || !sol.deferred.is_empty() {
                return Err(format!("{s} =? {t}: residual constraints in a first-order problem"));
            }
            let ours: Vec<FoTerm> = vars
                .iter()
                .map(|v| hol_to_fo(&sol.subst.apply(&Term::free(v.clone(), i()))))
                .collect();
            let theirs: Vec<FoTerm> = vars.iter().map(|v| fo_apply(&FoTerm::Var(v.clone()), &m)).collect();
            if variants(&ours, &theirs) {
                Ok(())
            } else {
                Err(format!("{s} =? {t}: {ours:?} is not a variant of {theirs:?}"))
            }
        }
        (m, sols) => Err(format!(
            "{s} =? {t}: reference {}, preunify {} solution(s)",
            if m.is_some() { "unifiable" } else { "not unifiable" },
            sols.len()
        )),
    }
}

// ---------------------------------------------------------------------
// Higher-order flex-rigid problems against brute-force binding search

/// Signature constants usable in bindings: `a b : ι`, `g : ι→ι`, `h : ι→ι→ι`.
pub fn ho_signature() -> Vec<Term> {
    vec![
        Term::constant("a", i()),
        Term::constant("b", i()),
        Term::constant("g", Type::fun(i(), i())),
        Term::constant("h", Type::curried([i(), i()], i())),
    ]
}

fn argument_types<R: Rng>(rng: &mut R) -> Vec<Type> {
    let choices = [
        vec![i()],
        vec![i(), i()],
        vec![Type::fun(i(), i())],
        vec![Type::fun(i(), i()), i()],
    ];
    choices[rng.random_range(0..choices.len())].clone()
}

fn random_ground<R: Rng>(rng: &mut R, ty: &Type, depth: usize) -> Term {
    if *ty == Type::fun(i(), i()) {
        return Term::constant("g", ty.clone());
    }
    let sig = ho_signature();
    if depth == 0 || rng.random_bool(0.4) {
        return sig[rng.random_range(0..2)].clone();
    }
    if rng.random_bool(0.7) {
        Term::app(sig[2].clone(), random_ground(rng, &i(), depth - 1))
    } else {
        Term::apps(
            sig[3].clone(),
            [random_ground(rng, &i(), depth - 1), random_ground(rng, &i(), depth - 1)],
        )
    }
}

/// `F t̄ ≟ r` with ground arguments and a ground rigid side.
pub struct FlexRigid {
    pub var: Var,
    pub args: Vec<Term>,
    pub rigid: Term,
}

impl FlexRigid {
    pub fn flex(&self) -> Term {
        Term::apps(self.var.term(), self.args.iter().cloned())
    }
}

impl std::fmt::Display for FlexRigid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} =? {}", self.flex(), self.rigid)
    }
}

pub fn random_flex_rigid<R: Rng>(rng: &mut R) -> FlexRigid {
    let tys = argument_types(rng);
    let var = Var::new("F", Type::curried(tys.clone(), i()));
    let args = tys.iter().map(|t| random_ground(rng, t, 1)).collect();
    let rigid = random_ground(rng, &i(), 2);
    FlexRigid { var, args, rigid }
}

/// Bodies of type ι in long normal form with exactly `heads` head
/// symbols, over the binder context `ctx` (outermost first) and the
/// signature.
fn bodies(ctx: &[Type], heads: usize) -> Vec<Term> {
    if heads == 0 {
        return Vec::new();
    }
    let k = ctx.len() as u32;
    let mut candidates: Vec<Term> = ho_signature();
    for (j, ty) in ctx.iter().enumerate() {
        candidates.push(Term::bound(k - 1 - j as u32, ty.clone()));
    }
    let mut out = Vec::new();
    for head in candidates {
        let (doms, cod) = head.ty().split();
        if cod != i() || doms.iter().any(|d| *d != i()) {
            continue;
        }
        for split in splits(heads - 1, doms.len()) {
            let mut partial = vec![head.clone()];
            for n in split {
                let args = bodies(ctx, n);
                partial = partial
                    .iter()
                    .flat_map(|p| args.iter().map(move |a| Term::app(p.clone(), a.clone())))
                    .collect();
            }
            out.extend(partial);
        }
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` positive numbers.
fn splits(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in splits(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every binding for the flex head built from at most `depth` head
/// symbols that makes both sides equal, printed in βη-normal form.
pub fn brute_force_solutions(p: &FlexRigid, depth: usize) -> BTreeSet<String> {
    let (ctx, _) = p.var.ty.split();
    let rigid = beta_normalize(&p.rigid);
    let mut out = BTreeSet::new();
    for n in 1..=depth {
        for body in bodies(&ctx, n) {
            let mut binding = body;
            for d in ctx.iter().rev() {
                binding = Term::abs(d.clone(), binding);
            }
            let value = beta_normalize(&Term::apps(binding.clone(), p.args.iter().cloned()));
            if value == rigid {
                out.insert(beta_normalize(&binding).to_string());
            }
        }
    }
    out
}

/// The bindings preunification finds for the flex head at the same depth.
pub fn preunify_solutions(p: &FlexRigid, depth: usize) -> Result<BTreeSet<String>, String> {
    let opts = UnifyOptions {
        max_depth: depth,
        max_solutions: 10_000,
        max_steps: 1_000_000,
        ..UnifyOptions::default()
    };
    let r = preunify(&[(p.flex(), p.rigid.clone())], &opts, &mut Namer::new());
    let mut out = BTreeSet::new();
    for s in &r.solutions {
        if !s.flex_flex.is_empty() || !s.deferred.is_empty() {
            return Err(format!("{p}: residual constraints"));
        }
        let b = s.subst.get(&p.var.name).ok_or_else(|| format!("{p}: F left unbound"))?;
        if !b.is_ground() {
            return Err(format!("{p}: open binding {b}"));
        }
        out.insert(beta_normalize(b).to_string());
    }
    Ok(out)
}

pub fn check_flex_rigid(p: &FlexRigid, depth: usize) -> Result<(), String> {
    let ours = preunify_solutions(p, depth)?;
    let oracle = brute_force_solutions(p, depth);
    if ours == oracle {
        Ok(())
    } else {
        Err(format!("{p}: preunify {ours:?}, brute force {oracle:?}"))
    }
}

// ---------------------------------------------------------------------
// Rule soundness over a micro-signature

/// `a b : ι`, `p : ι→o` and the set variable `X0 : ι→o`.
pub fn micro_literals() -> Vec<Literal> {
    let a = Term::constant("a", i());
    let b = Term::constant("b", i());
    let p = Term::constant("p", Type::predicate(i()));
    let x = Term::free("X0", Type::predicate(i()));
    let atoms = [
        Term::app(p.clone(), a.clone()),
        Term::app(p, b.clone()),
        Term::app(x.clone(), a.clone()),
        Term::app(x, b.clone()),
        Term::eq(a, b),
    ];
    atoms
        .iter()
        .flat_map(|t| [Literal::pos(t.clone()), Literal::neg(t.clone())])
        .collect()
}

/// All clauses with one to `max_len` distinct micro-signature literals.
pub fn micro_clauses(max_len: usize) -> Vec<Clause> {
    let lits = micro_literals();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn go(lits: &[Literal], start: usize, max: usize, pick: &mut Vec<Literal>, out: &mut Vec<Clause>) {
        if !pick.is_empty() {
            if let Some(c) = Clause::new(pick.clone(), Vec::new(), Origin::input("micro", false)) {
                out.push(c);
            }
        }
        if pick.len() == max {
            return;
        }
        for k in start..lits.len() {
            pick.push(lits[k].clone());
            go(lits, k + 1, max, pick, out);
            pick.pop();
        }
    }
    go(&lits, 0, max_len, &mut pick, &mut out);
    out
}

/// The choice axiom for `eps : (ι→o)→ι` as a clause.
pub fn choice_axiom_clause() -> Clause {
    let eps = Term::constant("eps", Type::fun(Type::predicate(i()), i()));
    let p = Term::free("X0", Type::predicate(i()));
    let y = Term::free("X1", i());
    Clause::new(
        vec![
            Literal::neg(Term::app(p.clone(), y)),
            Literal::pos(Term::app(p.clone(), Term::app(eps, p))),
        ],
        Vec::new(),
        Origin::input("choice", false),
    )
    .expect("non-trivial clause")
}

#[derive(Debug, Default)]
pub struct SoundnessReport {
    pub applications: usize,
    pub conclusions: usize,
    pub refused: usize,
    pub refusals: Vec<String>,
    pub violations: Vec<String>,
}

/// Conclusion `c` follows from `premises` when no model of the premises
/// falsifies every interpretation of the symbols `c` introduces. Skolem
/// functions over the clause variables are read back as existentials
/// below those variables, which keeps their types small for the oracle.
fn entailed(premises: &[Term], known: &BTreeSet<Name>, c: &Clause, choice: &BTreeSet<Name>) -> Verdict {
    let mut consts = BTreeSet::new();
    c.to_formula().constants(&mut consts);
    let fresh: Vec<(Name, Type)> = consts
        .into_iter()
        .filter(|(n, _)| !known.contains(n) && !hol_core::term::logic::is_logical(n))
        .collect();
    let concl = unskolemize(c, &fresh).unwrap_or_else(|| {
        let mut concl = c.to_formula();
        for (k, (n, ty)) in fresh.iter().enumerate() {
            let v = Var::new(format!("Fresh{k}"), ty.clone());
            concl = Term::exists(&v, &concl.replace_const(n, &v.term()));
        }
        concl
    });
    let mut fs = premises.to_vec();
    fs.push(Term::not(concl));
    find_model(&fs, choice, &OracleLimits::default())
}

/// `∃s̄ ∀x̄. φ(s̄ x̄)` as `∀x̄ ∃ȳ. φ(ȳ)` when every new symbol occurs only
/// applied to the same distinct clause variables `x̄`.
fn unskolemize(c: &Clause, fresh: &[(Name, Type)]) -> Option<Term> {
    let mut disj: Vec<Term> = c
        .literals
        .iter()
        .map(|l| {
            if l.positive {
                l.atom.clone()
            } else {
                Term::not(l.atom.clone())
            }
        })
        .collect();
    disj.extend(
        c.constraints
            .iter()
            .map(|(s, t)| Term::not(Term::eq(s.clone(), t.clone()))),
    );
    let mut body = disj.into_iter().reduce(Term::or).unwrap_or_else(Term::bot);
    let vars = c.vars();
    let mut shared: Option<Vec<Var>> = None;
    let mut witnesses = Vec::new();
    for (k, (n, ty)) in fresh.iter().enumerate() {
        let (doms, cod) = ty.split();
        let mut uses: Vec<Vec<Term>> = Vec::new();
        let mut occurrences = 0;
        body.visit(&mut |t, _| {
            if t.as_const().is_some_and(|(m, _)| m == n) {
                occurrences += 1;
            }
            let (h, args) = t.spine();
            if h.as_const().is_some_and(|(m, _)| m == n) && args.len() == doms.len() {
                uses.push(args.into_iter().cloned().collect());
            }
        });
        // every occurrence must be a full application
        if uses.len() != occurrences {
            return None;
        }
        let first = uses.first()?;
        let args: Vec<Var> = first
            .iter()
            .map(|a| a.as_free().map(|(v, t)| Var::new(v.clone(), t.clone())))
            .collect::<Option<_>>()?;
        if uses.iter().any(|u| u != first) {
            return None;
        }
        if shared.get_or_insert_with(|| args.clone()) != &args {
            return None;
        }
        let y = Var::new(format!("Witness{k}"), cod);
        let mut lam = y.term();
        for d in doms.iter().rev() {
            lam = Term::abs(d.clone(), lam);
        }
        body = beta_normalize(&body.replace_const(n, &lam));
        witnesses.push(y);
    }
    let outer = shared.unwrap_or_default();
    let inner: Vec<&Var> = vars.iter().filter(|v| !outer.contains(v)).collect();
    let mut f = inner.iter().rev().fold(body, |acc, v| Term::forall(v, &acc));
    f = witnesses.iter().rev().fold(f, |acc, y| Term::exists(y, &acc));
    Some(outer.iter().rev().fold(f, |acc, v| Term::forall(v, &acc)))
}

/// Applies `rule` to `premises` in a fresh state and checks each new
/// clause against the finite-model oracle.
pub fn check_rule(rule: &str, premises: &[Clause], choice: &BTreeSet<Name>, report: &mut SoundnessReport) {
    let mut state = ProverState::new(ExtOptions::default());
    state.ps = PrimSubstMode::Quantifiers;
    let mut ids = Vec::new();
    for c in premises {
        match state.insert(c.clone()) {
            Some(id) => ids.push(id),
            None => return,
        }
    }
    if ids.len() == 1 && rule == hol_core::calculus::rules::RESOLVE {
        ids.push(ids[0]);
    }
    if choice.contains("eps") {
        let _ = state.apply_rule(hol_core::calculus::rules::DETECT_CHOICE_FN, &[ids[0]]);
    }
    let Ok(applied) = state.apply_rule(rule, &ids) else {
        return;
    };
    report.applications += 1;
    let fs: Vec<Term> = premises.iter().map(Clause::to_formula).collect();
    let mut known = BTreeSet::new();
    for f in &fs {
        let mut cs = BTreeSet::new();
        f.constants(&mut cs);
        known.extend(cs.into_iter().map(|(n, _)| n));
    }
    for id in applied.new {
        let c = state.clauses[&id].clone();
        report.conclusions += 1;
        match entailed(&fs, &known, &c, choice) {
            Verdict::NoModel => {}
            Verdict::Refused(why) => {
                report.refused += 1;
                report.refusals.push(format!("{rule} gave {c}: {why}"));
            }
            Verdict::Model(m) => report.violations.push(format!(
                "{rule} on [{}] gave {c}, false in {m}",
                premises.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ; ")
            )),
        }
    }
}

/// Every rule over every premise combination of the micro-signature:
/// unary rules on clauses up to `unary_len` literals, resolution on pairs
/// up to `binary_len` literals, and the choice rules next to the choice
/// axiom.
pub fn micro_soundness(unary_len: usize, binary_len: usize) -> SoundnessReport {
    use hol_core::calculus::rules;
    let mut report = SoundnessReport::default();
    let none = BTreeSet::new();
    let unary = [
        rules::FACTORISE,
        rules::EQ_RESOLVE,
        rules::LEIB_EQ,
        rules::ANDR_EQ,
        rules::PRIM_SUBST,
        rules::DETECT_CHOICE_FN,
        rules::CHOICE,
    ];
    for c in micro_clauses(unary_len) {
        for rule in unary {
            check_rule(rule, std::slice::from_ref(&c), &none, &mut report);
        }
    }
    let small = micro_clauses(binary_len);
    for c in &small {
        for d in &small {
            check_rule(rules::RESOLVE, &[c.clone(), d.clone()], &none, &mut report);
        }
    }
    // with a registered choice function
    let eps_set: BTreeSet<Name> = [Name::from("eps")].into();
    let ax = choice_axiom_clause();
    let eps = Term::constant("eps", Type::fun(Type::predicate(i()), i()));
    let p = Term::constant("p", Type::predicate(i()));
    let eps_p = Term::app(eps, p.clone());
    let extra = [
        Literal::pos(Term::app(p.clone(), eps_p.clone())),
        Literal::neg(Term::app(p.clone(), eps_p.clone())),
        Literal::neg(Term::app(Term::free("X2", Type::predicate(i())), eps_p)),
    ];
    for l in extra {
        let c = Clause::new(vec![l], Vec::new(), Origin::input("eps", false)).expect("clause");
        check_rule(rules::CHOICE, &[ax.clone(), c.clone()], &eps_set, &mut report);
        check_choice_on_second(&ax, &c, &eps_set, &mut report);
    }
    report
}

/// The choice rule applied to the second clause once the first has
/// registered `eps`.
fn check_choice_on_second(ax: &Clause, c: &Clause, choice: &BTreeSet<Name>, report: &mut SoundnessReport) {
    use hol_core::calculus::rules;
    let mut state = ProverState::new(ExtOptions::default());
    let (Some(a), Some(k)) = (state.insert(ax.clone()), state.insert(c.clone())) else {
        return;
    };
    let _ = state.apply_rule(rules::DETECT_CHOICE_FN, &[a]);
    let Ok(applied) = state.apply_rule(rules::CHOICE, &[k]) else {
        return;
    };
    report.applications += 1;
    // the axiom stays a premise: choice conclusions rely on it
    let fs = vec![ax.to_formula(), c.to_formula()];
    let mut known = BTreeSet::new();
    for f in &fs {
        let mut cs = BTreeSet::new();
        f.constants(&mut cs);
        known.extend(cs.into_iter().map(|(n, _)| n));
    }
    for id in applied.new {
        let concl = state.clauses[&id].clone();
        report.conclusions += 1;
        match entailed(&fs, &known, &concl, choice) {
            Verdict::NoModel => {}
            Verdict::Refused(_) => report.refused += 1,
            Verdict::Model(m) => report
                .violations
                .push(format!("choice on {c} gave {concl}, false in {m}")),
        }
    }
}

// ---------------------------------------------------------------------
// Monotonicity against model extension

/// Ten small first-order problems over `$i`. The flag marks equality-free
/// ones.
pub fn monotonicity_problems() -> Vec<(&'static str, bool, String)> {
    let decl = "thf(p_t, type, p: $i > $o).\nthf(q_t, type, q: $i > $o).\nthf(r_t, type, r: $i > $i > $o).\n\
                thf(f_t, type, f: $i > $i).\nthf(c_t, type, c: $i).\nthf(d_t, type, d: $i).\n";
    let probs: [(&str, bool, &str); 10] = [
        ("cover", true, "![X: $i]: ((p @ X) | (q @ X))\n~(p @ c)"),
        (
            "reflexive_symmetric",
            true,
            "![X: $i]: (r @ X @ X)\n![X: $i, Y: $i]: ((r @ X @ Y) => (r @ Y @ X))",
        ),
        ("closed_under_f", true, "![X: $i]: ((p @ X) => (p @ (f @ X)))\np @ c"),
        ("alternating", true, "![X: $i]: ~((p @ X) <=> (p @ (f @ X)))"),
        (
            "witness",
            true,
            "?[X: $i]: ((p @ X) & ~(q @ X))\n![X: $i]: ((q @ X) | (r @ X @ X))",
        ),
        (
            "irreflexive_or_p",
            true,
            "![X: $i]: (~(r @ X @ X) | (p @ X))\nr @ c @ d",
        ),
        ("two_elements", false, "![X: $i]: ((X = c) | (X = d))"),
        ("f_identity", false, "![X: $i]: ((f @ X) = X)"),
        ("p_only_at_c", false, "~(c = d)\n![X: $i]: ((p @ X) => (X = c))"),
        (
            "f_lands_on_c",
            false,
            "(f @ c) = d\n![X: $i]: ((q @ X) | ((f @ X) = c))",
        ),
    ];
    probs
        .iter()
        .map(|(name, eq_free, axioms)| {
            let mut text = decl.to_string();
            for (k, ax) in axioms.lines().enumerate() {
                text.push_str(&format!("thf(ax{k}, axiom, {ax}).\n"));
            }
            (*name, *eq_free, text)
        })
        .collect()
}

fn element_vars(n: usize) -> Vec<Var> {
    (0..n).map(|k| Var::new(format!("E{k}"), i())).collect()
}

/// `E0 … En-1` pairwise distinct.
fn distinct(vs: &[Var]) -> Vec<Term> {
    let mut out = Vec::new();
    for x in 0..vs.len() {
        for y in x + 1..vs.len() {
            out.push(Term::not(Term::eq(vs[x].term(), vs[y].term())));
        }
    }
    out
}

fn conj(mut ts: Vec<Term>) -> Term {
    let Some(mut acc) = ts.pop() else { return Term::top() };
    while let Some(t) = ts.pop() {
        acc = Term::and(t, acc);
    }
    acc
}

fn all_tuples(n: usize, arity: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| (0..n as u64).map(move |e| [t.clone(), vec![e]].concat()))
            .collect();
    }
    out
}

/// The diagram of a model with `|ι| = 2` over the element variables:
/// every symbol's value on every tuple of the two elements.
fn diagram(m: &Model, symbols: &BTreeMap<Name, Type>, elems: &[Var]) -> Term {
    let mut facts = distinct(elems);
    for (name, ty) in symbols {
        let (doms, cod) = ty.split();
        if doms.iter().any(|d| *d != i()) || !m.values.contains_key(name) {
            continue;
        }
        for tuple in all_tuples(elems.len(), doms.len()) {
            let v = m.lookup(name, &tuple).expect("value");
            let lhs = Term::apps(
                Term::constant(name.clone(), ty.clone()),
                tuple.iter().map(|&e| elems[e as usize].term()),
            );
            facts.push(if cod == Type::O {
                if v == 1 {
                    lhs
                } else {
                    Term::not(lhs)
                }
            } else {
                Term::eq(lhs, elems[v as usize].term())
            });
        }
    }
    conj(facts)
}

fn close_exists(vs: &[Var], body: Term) -> Term {
    vs.iter().rev().fold(body, |acc, v| Term::exists(v, &acc))
}

/// Every model with `|ι| = 2`, one per isomorphism class, found by
/// blocking each model's diagram in turn.
pub fn size_two_models(formulas: &[Term], symbols: &BTreeMap<Name, Type>) -> Result<Vec<Model>, String> {
    let limits = OracleLimits {
        max_size: 2,
        ..OracleLimits::default()
    };
    let elems = element_vars(2);
    let mut fs = formulas.to_vec();
    fs.push(close_exists(&elems, conj(distinct(&elems))));
    let mut models = Vec::new();
    loop {
        match find_model(&fs, &BTreeSet::new(), &limits) {
            Verdict::Model(m) => {
                fs.push(Term::not(close_exists(&elems, diagram(&m, symbols, &elems))));
                models.push(m);
                if models.len() > 4096 {
                    return Err("too many models".into());
                }
            }
            Verdict::NoModel => return Ok(models),
            Verdict::Refused(why) => return Err(why),
        }
    }
}

/// Does a model with `|ι| = 3` contain `m` as a substructure?
pub fn extends_to_three(formulas: &[Term], symbols: &BTreeMap<Name, Type>, m: &Model) -> Verdict {
    let elems = element_vars(3);
    let mut body = distinct(&elems);
    body.push(diagram(m, symbols, &elems[..2]));
    let mut fs = formulas.to_vec();
    fs.push(close_exists(&elems, conj(body)));
    find_model(&fs, &BTreeSet::new(), &OracleLimits::default())
}

// ---------------------------------------------------------------------
// Random well-typed terms

/// Constants of the random-term signature.
pub fn term_signature() -> Vec<Term> {
    let i = i();
    vec![
        Term::constant("a", i.clone()),
        Term::constant("b", i.clone()),
        Term::constant("f", Type::fun(i.clone(), i.clone())),
        Term::constant("g", Type::curried([i.clone(), i.clone()], i.clone())),
        Term::constant("p", Type::predicate(i.clone())),
        Term::constant("q", Type::fun(Type::fun(i.clone(), i.clone()), i.clone())),
        Term::constant("r", Type::O),
        Term::not_const(),
        Term::binop_const(hol_core::term::logic::AND),
    ]
}

/// Free variables the random terms may mention.
pub fn term_free_vars() -> Vec<Var> {
    vec![
        Var::new("X", i()),
        Var::new("Y", i()),
        Var::new("F", Type::fun(i(), i())),
        Var::new("P", Type::predicate(i())),
    ]
}

fn small_type<R: Rng>(rng: &mut R) -> Type {
    match rng.random_range(0..4) {
        0 | 1 => i(),
        2 => Type::fun(i(), i()),
        _ => Type::O,
    }
}

/// A random term of type `ty` under binders `ctx` (outermost first),
/// with β-redexes sprinkled in.
pub fn random_term<R: Rng>(rng: &mut R, ctx: &[Type], ty: &Type, depth: usize) -> Term {
    if let Type::Fun(a, b) = ty {
        if depth > 0 && rng.random_bool(0.6) {
            let mut inner = ctx.to_vec();
            inner.push((**a).clone());
            return Term::abs((**a).clone(), random_term(rng, &inner, b, depth - 1));
        }
    }
    if depth > 1 && rng.random_bool(0.25) {
        // (λx:σ. s) t
        let sigma = small_type(rng);
        let mut inner = ctx.to_vec();
        inner.push(sigma.clone());
        let body = random_term(rng, &inner, ty, depth - 1);
        let arg = random_term(rng, ctx, &sigma, depth - 1);
        return Term::app(Term::abs(sigma, body), arg);
    }
    // heads whose type ends in `ty`
    let k = ctx.len() as u32;
    let mut heads: Vec<Term> = term_signature();
    heads.extend(term_free_vars().iter().map(Var::term));
    heads.extend(
        ctx.iter()
            .enumerate()
            .map(|(j, t)| Term::bound(k - 1 - j as u32, t.clone())),
    );
    let fitting: Vec<(Term, Vec<Type>)> = heads
        .into_iter()
        .filter_map(|h| {
            let mut doms = Vec::new();
            let mut cur = h.ty();
            loop {
                if cur == *ty {
                    return Some((h, doms));
                }
                match cur {
                    Type::Fun(a, b) => {
                        doms.push((*a).clone());
                        cur = (*b).clone();
                    }
                    _ => return None,
                }
            }
        })
        .filter(|(_, doms)| depth > 0 || doms.is_empty())
        .collect();
    if fitting.is_empty() {
        // only function types without a fitting head reach here
        let Type::Fun(a, b) = ty else {
            unreachable!("every base type has a constant")
        };
        let mut inner = ctx.to_vec();
        inner.push((**a).clone());
        return Term::abs((**a).clone(), random_term(rng, &inner, b, depth.saturating_sub(1)));
    }
    let (h, doms) = fitting[rng.random_range(0..fitting.len())].clone();
    let args: Vec<Term> = doms
        .iter()
        .map(|d| random_term(rng, ctx, d, depth.saturating_sub(1)))
        .collect();
    Term::apps(h, args)
}

/// A random closed formula over `a b : ι`, `f : ι→ι`, `p : ι→o`,
/// `r : ι→ι→o` and `s : o`, with first-order quantifiers.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> Term {
    fn term<R: Rng>(rng: &mut R, scope: &[Var], depth: usize) -> Term {
        let pick = rng.random_range(0..4);
        if pick == 0 && depth > 0 {
            return Term::app(Term::constant("f", Type::fun(i(), i())), term(rng, scope, depth - 1));
        }
        if pick == 1 || scope.is_empty() {
            return Term::constant(if rng.random_bool(0.5) { "a" } else { "b" }, i());
        }
        scope[rng.random_range(0..scope.len())].term()
    }
    fn go<R: Rng>(rng: &mut R, scope: &mut Vec<Var>, depth: usize) -> Term {
        let choice = if depth == 0 {
            rng.random_range(0..4)
        } else {
            rng.random_range(0..11)
        };
        match choice {
            0 => Term::app(Term::constant("p", Type::predicate(i())), term(rng, scope, 1)),
            1 => Term::apps(
                Term::constant("r", Type::curried([i(), i()], Type::O)),
                [term(rng, scope, 1), term(rng, scope, 1)],
            ),
            2 => Term::eq(term(rng, scope, 1), term(rng, scope, 1)),
            3 => Term::constant("s", Type::O),
            4 => Term::not(go(rng, scope, depth - 1)),
            5 => Term::and(go(rng, scope, depth - 1), go(rng, scope, depth - 1)),
            6 => Term::or(go(rng, scope, depth - 1), go(rng, scope, depth - 1)),
            7 => Term::imp(go(rng, scope, depth - 1), go(rng, scope, depth - 1)),
            8 => Term::iff(go(rng, scope, depth - 1), go(rng, scope, depth - 1)),
            k => {
                let v = Var::new(format!("V{}", scope.len()), i());
                scope.push(v.clone());
                let body = go(rng, scope, depth - 1);
                scope.pop();
                if k == 9 {
                    Term::forall(&v, &body)
                } else {
                    Term::exists(&v, &body)
                }
            }
        }
    }
    go(rng, &mut Vec::new(), depth)
}

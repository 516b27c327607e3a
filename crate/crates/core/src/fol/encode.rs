//! From λ-free higher-order formulas to first-order formulas.
//!
//! Formula-level logic maps to first-order connectives. Inside atoms,
//! constants are applied directly up to the least number of arguments they
//! ever receive, the rest goes through the binary `at`. Formulas in term
//! positions are reified and read back with `pTrue`, and logical constants
//! in term positions are replaced by proxy symbols with defining axioms.
//! Type information is added according to the [`TranslationMode`].

use std::collections::{BTreeMap, BTreeSet};

use super::mono::monotone_sorts;
use super::syntax::{sort_of, FoAnnotated, FoFormula, FoProblem, FoRole, FoTerm, FoVar, Sort};
use super::{FolError, TranslationMode, APPLY, GUARD_PREFIX, PTRUE, TAG_FN, TAG_PREFIX};
use crate::clausify::open_binder;
use crate::term::{logic, Fresh, Name, Node, Term, Type, Var};

/// Higher-order formula skeleton whose atoms are λ-free terms.
enum Skel {
    True,
    False,
    Atom(Term),
    Eq(Term, Term),
    Not(Box<Skel>),
    And(Box<Skel>, Box<Skel>),
    Or(Box<Skel>, Box<Skel>),
    Imp(Box<Skel>, Box<Skel>),
    Iff(Box<Skel>, Box<Skel>),
    All(Var, Box<Skel>),
    Ex(Var, Box<Skel>),
}

#[derive(Default)]
struct Usage {
    min_arity: BTreeMap<Name, usize>,
    in_term: BTreeSet<Name>,
    types: BTreeMap<Name, Type>,
}

impl Usage {
    fn note_head(&mut self, n: &Name, ty: &Type, args: usize) {
        let e = self.min_arity.entry(n.clone()).or_insert(args);
        *e = (*e).min(args);
        self.types.insert(n.clone(), ty.clone());
    }

    fn scan_term(&mut self, t: &Term) {
        let (h, args) = t.spine();
        if let Node::Const(n, ty) = h.node() {
            self.note_head(n, ty, args.len());
            self.in_term.insert(n.clone());
        }
        for a in args {
            self.scan_term(a);
        }
    }

    fn scan_atom(&mut self, t: &Term) {
        let (h, args) = t.spine();
        if let Node::Const(n, ty) = h.node() {
            self.note_head(n, ty, args.len());
        }
        for a in args {
            self.scan_term(a);
        }
    }

    fn is_pred(&self, n: &Name) -> bool {
        let ty = &self.types[n];
        !self.in_term.contains(n) && *ty.target() == Type::O && self.min_arity[n] == ty.arity()
    }
}

struct Proxies {
    needed: BTreeMap<Name, Term>,
}

impl Proxies {
    /// Replaces logical constants by proxies throughout an atom's arguments.
    fn replace(&mut self, t: &Term) -> Term {
        match t.node() {
            Node::Const(n, ty) if logic::is_logical(n) => {
                let name = proxy_name(n, ty);
                self.needed.entry(name.clone()).or_insert_with(|| t.clone());
                Term::constant(name, ty.clone())
            }
            Node::App(f, a) => Term::app(self.replace(f), self.replace(a)),
            _ => t.clone(),
        }
    }

    /// `∀x̄. proxy x̄ ⇔ op x̄` for a logical constant `op`.
    fn axiom(name: &Name, op: &Term) -> Term {
        let ty = op.ty();
        let (args, _) = ty.split();
        let vars: Vec<Var> = args
            .iter()
            .enumerate()
            .map(|(i, t)| Var::new(format!("#A{i}"), t.clone()))
            .collect();
        let lhs = Term::apps(Term::constant(name.clone(), ty.clone()), vars.iter().map(Var::term));
        let rhs = Term::apps(op.clone(), vars.iter().map(Var::term));
        let mut f = Term::iff(lhs, rhs);
        for v in vars.iter().rev() {
            f = Term::forall(v, &f);
        }
        f
    }
}

fn proxy_name(n: &str, ty: &Type) -> Name {
    let base = match n {
        logic::NOT => "cNot",
        logic::AND => "cAnd",
        logic::OR => "cOr",
        logic::IMP => "cImp",
        logic::IFF => "cIff",
        logic::TRUE => "cTrue",
        logic::FALSE => "cFalse",
        logic::EQ => return Name::from(format!("cEq_{}", sort_of(ty.domain().expect("equality type")))),
        logic::FORALL | logic::EXISTS => {
            let elem = ty.domain().and_then(Type::domain).expect("quantifier type");
            let q = if n == logic::FORALL { "cAll" } else { "cEx" };
            return Name::from(format!("{q}_{}", sort_of(elem)));
        }
        _ => unreachable!("not a logical constant: {n}"),
    };
    Name::from(base)
}

/// Turns closed higher-order formulas into skeletons, opening binders with
/// fresh `B<n>` variables.
struct Walker {
    fresh: Fresh,
    proxies: Proxies,
}

impl Walker {
    fn walk(&mut self, t: &Term) -> Result<Skel, FolError> {
        use Skel::*;
        if t.is_const_named(logic::TRUE) {
            return Ok(True);
        }
        if t.is_const_named(logic::FALSE) {
            return Ok(False);
        }
        if let Some(a) = t.logical_args(logic::NOT, 1) {
            return Ok(Not(Box::new(self.walk(a[0])?)));
        }
        for (op, mk) in [
            (logic::AND, And as fn(Box<Skel>, Box<Skel>) -> Skel),
            (logic::OR, Or),
            (logic::IMP, Imp),
            (logic::IFF, Iff),
        ] {
            if let Some(a) = t.logical_args(op, 2) {
                return Ok(mk(Box::new(self.walk(a[0])?), Box::new(self.walk(a[1])?)));
            }
        }
        if let Some((l, r)) = t.as_eq() {
            if l.ty() == Type::O {
                return Ok(Iff(Box::new(self.walk(l)?), Box::new(self.walk(r)?)));
            }
            return Ok(Eq(self.atom(l)?, self.atom(r)?));
        }
        for (q, forall) in [(logic::FORALL, true), (logic::EXISTS, false)] {
            if let Some(a) = t.logical_args(q, 1) {
                let (ty, body) = open_binder(a[0]);
                let v = Var::new(self.fresh.name("B"), ty);
                let body = crate::term::beta_normalize(&body.instantiate(&v.term()));
                let inner = Box::new(self.walk(&body)?);
                return Ok(if forall { All(v, inner) } else { Ex(v, inner) });
            }
        }
        Ok(Atom(self.atom(t)?))
    }

    fn atom(&mut self, t: &Term) -> Result<Term, FolError> {
        if t.contains_abs() {
            return Err(FolError::NotLambdaFree(t.to_string()));
        }
        if t.has_loose_bvars() {
            return Err(FolError::LooseBound(t.to_string()));
        }
        Ok(self.proxies.replace(t))
    }
}

fn scan(s: &Skel, u: &mut Usage) {
    match s {
        Skel::True | Skel::False => {}
        Skel::Atom(t) => u.scan_atom(t),
        Skel::Eq(a, b) => {
            u.scan_term(a);
            u.scan_term(b);
        }
        Skel::Not(a) | Skel::All(_, a) | Skel::Ex(_, a) => scan(a, u),
        Skel::And(a, b) | Skel::Or(a, b) | Skel::Imp(a, b) | Skel::Iff(a, b) => {
            scan(a, u);
            scan(b, u);
        }
    }
}

/// Symbol table mapping higher-order names to first-order ones, keeping
/// user symbols clear of the encoding's own vocabulary.
struct Symbols {
    map: BTreeMap<Name, Name>,
    taken: BTreeSet<Name>,
}

fn is_internal(n: &str) -> bool {
    n == APPLY
        || n == PTRUE
        || n == TAG_FN
        || n.starts_with(GUARD_PREFIX)
        || n.starts_with(TAG_PREFIX)
        || n == "bool_ext"
}

impl Symbols {
    fn new<'a>(names: impl Iterator<Item = &'a Name>, proxies: &BTreeSet<Name>) -> Symbols {
        let mut s = Symbols {
            map: BTreeMap::new(),
            taken: proxies.clone(),
        };
        for n in names {
            if proxies.contains(n) {
                s.map.insert(n.clone(), n.clone());
                continue;
            }
            let mut cand = n.clone();
            let mut k = 0;
            while is_internal(&cand) || s.taken.contains(&cand) {
                cand = Name::from(format!("{n}_{k}"));
                k += 1;
            }
            s.taken.insert(cand.clone());
            s.map.insert(n.clone(), cand);
        }
        s
    }
}

struct Encoder<'a> {
    mode: TranslationMode,
    usage: &'a Usage,
    syms: &'a Symbols,
    /// First-order function symbols: argument types and result type.
    fun_sigs: BTreeMap<Name, (Vec<Type>, Type)>,
    /// Function types at which `at` is used.
    at_types: BTreeSet<Type>,
    uses_bool_terms: bool,
}

impl Encoder<'_> {
    fn tag(&self, t: FoTerm, ty: &Type) -> FoTerm {
        if self.mode == TranslationMode::FullyTyped {
            FoTerm::app(
                TAG_FN,
                vec![t, FoTerm::constant(format!("{TAG_PREFIX}{}", sort_of(ty)))],
            )
        } else {
            t
        }
    }

    fn term(&mut self, t: &Term) -> FoTerm {
        let (h, args) = t.spine();
        let (mut cur, mut ty, rest) = match h.node() {
            Node::Free(n, ty) => (FoTerm::var(n.clone()), ty.clone(), &args[..]),
            Node::Const(n, ty) => {
                let m = self.usage.min_arity[n].min(args.len());
                let (arg_tys, _) = ty.split();
                let mut res = ty.clone();
                for _ in 0..m {
                    res = res.codomain().expect("arity").clone();
                }
                let enc: Vec<FoTerm> = args[..m].iter().map(|a| self.term(a)).collect();
                let name = self.syms.map[n].clone();
                self.fun_sigs.insert(name.clone(), (arg_tys[..m].to_vec(), res.clone()));
                (FoTerm::app(name, enc), res, &args[m..])
            }
            _ => unreachable!("λ-free atoms have no bound heads"),
        };
        if ty == Type::O {
            self.uses_bool_terms = true;
        }
        cur = self.tag(cur, &ty);
        for a in rest {
            let arg = self.term(a);
            self.at_types.insert(ty.clone());
            ty = ty.codomain().expect("application").clone();
            cur = self.tag(FoTerm::app(APPLY, vec![cur, arg]), &ty);
        }
        if ty == Type::O {
            self.uses_bool_terms = true;
        }
        cur
    }

    fn atom(&mut self, t: &Term) -> FoFormula {
        let (h, args) = t.spine();
        if let Node::Const(n, _) = h.node() {
            if self.usage.is_pred(n) {
                let enc = args.iter().map(|a| self.term(a)).collect();
                return FoFormula::pred(self.syms.map[n].clone(), enc);
            }
        }
        self.uses_bool_terms = true;
        FoFormula::pred(PTRUE, vec![self.term(t)])
    }

    fn formula(&mut self, s: &Skel) -> FoFormula {
        let b = |e: &mut Self, x: &Skel| Box::new(e.formula(x));
        match s {
            Skel::True => FoFormula::True,
            Skel::False => FoFormula::False,
            Skel::Atom(t) => self.atom(t),
            Skel::Eq(l, r) => FoFormula::Eq(self.term(l), self.term(r)),
            Skel::Not(a) => FoFormula::Not(b(self, a)),
            Skel::And(x, y) => FoFormula::And(vec![self.formula(x), self.formula(y)]),
            Skel::Or(x, y) => FoFormula::Or(vec![self.formula(x), self.formula(y)]),
            Skel::Imp(x, y) => FoFormula::Implies(b(self, x), b(self, y)),
            Skel::Iff(x, y) => FoFormula::Iff(b(self, x), b(self, y)),
            Skel::All(v, body) => {
                FoFormula::Forall(vec![FoVar::new(v.name.clone(), Some(sort_of(&v.ty)))], b(self, body))
            }
            Skel::Ex(v, body) => {
                FoFormula::Exists(vec![FoVar::new(v.name.clone(), Some(sort_of(&v.ty)))], b(self, body))
            }
        }
    }

    fn var(&self, name: &str, ty: &Type) -> FoTerm {
        self.tag(FoTerm::var(name), ty)
    }
}

/// Guard atom `is_<sort>(t)`.
fn guard(sort: &Sort, t: FoTerm) -> FoFormula {
    FoFormula::pred(format!("{GUARD_PREFIX}{sort}"), vec![t])
}

/// Adds guards to quantified variables whose sort is not erased.
fn add_guards(f: &FoFormula, erased: &BTreeSet<Sort>) -> FoFormula {
    let guards = |vs: &[FoVar]| -> Vec<FoFormula> {
        vs.iter()
            .filter_map(|v| {
                v.sort
                    .as_ref()
                    .filter(|s| !erased.contains(*s))
                    .map(|s| guard(s, FoTerm::var(v.name.clone())))
            })
            .collect()
    };
    match f {
        FoFormula::True | FoFormula::False | FoFormula::Pred(..) | FoFormula::Eq(..) => f.clone(),
        FoFormula::Not(a) => FoFormula::not(add_guards(a, erased)),
        FoFormula::And(v) => FoFormula::And(v.iter().map(|g| add_guards(g, erased)).collect()),
        FoFormula::Or(v) => FoFormula::Or(v.iter().map(|g| add_guards(g, erased)).collect()),
        FoFormula::Implies(a, b) => FoFormula::implies(add_guards(a, erased), add_guards(b, erased)),
        FoFormula::Iff(a, b) => FoFormula::iff(add_guards(a, erased), add_guards(b, erased)),
        FoFormula::Forall(vs, b) => {
            let g = guards(vs);
            let body = add_guards(b, erased);
            let body = if g.is_empty() {
                body
            } else {
                FoFormula::implies(FoFormula::and(g), body)
            };
            FoFormula::Forall(vs.clone(), Box::new(body))
        }
        FoFormula::Exists(vs, b) => {
            let mut g = guards(vs);
            g.push(add_guards(b, erased));
            FoFormula::Exists(vs.clone(), Box::new(FoFormula::and(g)))
        }
    }
}

/// Translates closed higher-order formulas whose atoms are λ-free (binders
/// only at formula level) into a first-order problem.
pub fn to_intermediate(formulas: &[(String, FoRole, Term)], mode: TranslationMode) -> Result<FoProblem, FolError> {
    let mut walker = Walker {
        fresh: Fresh::new(),
        proxies: Proxies {
            needed: BTreeMap::new(),
        },
    };
    let mut skels: Vec<(String, FoRole, Skel)> = Vec::new();
    for (name, role, f) in formulas {
        if f.ty() != Type::O {
            return Err(FolError::NotFormula(f.to_string()));
        }
        skels.push((name.clone(), *role, walker.walk(f)?));
    }
    // proxy axioms may need further proxies (e.g. equality at `$o`)
    let mut done: BTreeSet<Name> = BTreeSet::new();
    let mut proxy_skels = Vec::new();
    loop {
        let todo: Vec<(Name, Term)> = walker
            .proxies
            .needed
            .iter()
            .filter(|(n, _)| !done.contains(*n))
            .map(|(n, t)| (n.clone(), t.clone()))
            .collect();
        if todo.is_empty() {
            break;
        }
        for (n, op) in todo {
            let ax = Proxies::axiom(&n, &op);
            proxy_skels.push((format!("proxy_{n}"), FoRole::Axiom, walker.walk(&ax)?));
            done.insert(n);
        }
    }
    let mut all: Vec<(String, FoRole, Skel)> = proxy_skels;
    all.extend(skels);

    let mut usage = Usage::default();
    for (_, _, s) in &all {
        scan(s, &mut usage);
    }
    let syms = Symbols::new(usage.types.keys(), &done);
    let mut enc = Encoder {
        mode,
        usage: &usage,
        syms: &syms,
        fun_sigs: BTreeMap::new(),
        at_types: BTreeSet::new(),
        uses_bool_terms: false,
    };
    let mut body: Vec<FoAnnotated> = all
        .iter()
        .map(|(name, role, s)| FoAnnotated {
            name: name.clone(),
            role: *role,
            formula: enc.formula(s),
        })
        .collect();
    if enc.uses_bool_terms {
        let o = Type::O;
        let (x, y) = (enc.var("X", &o), enc.var("Y", &o));
        let vs = vec![FoVar::new("X", Some(sort_of(&o))), FoVar::new("Y", Some(sort_of(&o)))];
        let ext = FoFormula::forall(
            vs,
            FoFormula::implies(
                FoFormula::iff(
                    FoFormula::pred(PTRUE, vec![x.clone()]),
                    FoFormula::pred(PTRUE, vec![y.clone()]),
                ),
                FoFormula::Eq(x, y),
            ),
        );
        body.insert(
            0,
            FoAnnotated {
                name: "bool_ext".into(),
                role: FoRole::Axiom,
                formula: ext,
            },
        );
    }

    let mut out = FoProblem::default();
    match mode {
        TranslationMode::FullyTyped => out.formulas = body,
        TranslationMode::FofFull | TranslationMode::FofExperiment => {
            let many_sorted = FoProblem { formulas: body };
            let erased: BTreeSet<Sort> = if mode == TranslationMode::FofExperiment {
                monotone_sorts(&many_sorted)
                    .into_iter()
                    .filter(|s| !s.starts_with('F'))
                    .collect()
            } else {
                BTreeSet::new()
            };
            typing_axioms(&enc.fun_sigs, &enc.at_types, &erased, &many_sorted, &mut out);
            for a in many_sorted.formulas {
                out.push(a.name, a.role, add_guards(&a.formula, &erased));
            }
        }
    }
    Ok(out)
}

fn typing_axioms(
    funs: &BTreeMap<Name, (Vec<Type>, Type)>,
    at_types: &BTreeSet<Type>,
    erased: &BTreeSet<Sort>,
    body: &FoProblem,
    out: &mut FoProblem,
) {
    let kept = |ty: &Type| !erased.contains(&sort_of(ty));
    let mut guarded_sorts: BTreeSet<Sort> = BTreeSet::new();
    for a in &body.formulas {
        collect_var_sorts(&a.formula, &mut guarded_sorts);
    }
    guarded_sorts.retain(|s| !erased.contains(s));
    for s in &guarded_sorts {
        out.push(
            format!("inhabited_{s}"),
            FoRole::Axiom,
            FoFormula::exists(vec![FoVar::new("X", None)], guard(s, FoTerm::var("X"))),
        );
    }
    for (f, (args, res)) in funs {
        if !kept(res) {
            continue;
        }
        let vars: Vec<FoVar> = (0..args.len()).map(|i| FoVar::new(format!("X{i}"), None)).collect();
        let hyps: Vec<FoFormula> = args
            .iter()
            .zip(&vars)
            .filter(|(ty, _)| kept(ty))
            .map(|(ty, v)| guard(&sort_of(ty), FoTerm::var(v.name.clone())))
            .collect();
        let concl = guard(
            &sort_of(res),
            FoTerm::app(f.clone(), vars.iter().map(|v| FoTerm::var(v.name.clone())).collect()),
        );
        let ax = if hyps.is_empty() {
            concl
        } else {
            FoFormula::implies(FoFormula::and(hyps), concl)
        };
        out.push(format!("type_{f}"), FoRole::Axiom, FoFormula::forall(vars, ax));
    }
    for ty in at_types {
        let (Some(a), Some(b)) = (ty.domain(), ty.codomain()) else {
            continue;
        };
        if !kept(b) {
            continue;
        }
        let (f, x) = (FoTerm::var("F"), FoTerm::var("X"));
        let mut hyps = vec![guard(&sort_of(ty), f.clone())];
        if kept(a) {
            hyps.push(guard(&sort_of(a), x.clone()));
        }
        let ax = FoFormula::implies(FoFormula::and(hyps), guard(&sort_of(b), FoTerm::app(APPLY, vec![f, x])));
        out.push(
            format!("type_at_{}", sort_of(ty)),
            FoRole::Axiom,
            FoFormula::forall(vec![FoVar::new("F", None), FoVar::new("X", None)], ax),
        );
    }
}

fn collect_var_sorts(f: &FoFormula, out: &mut BTreeSet<Sort>) {
    match f {
        FoFormula::Forall(vs, b) | FoFormula::Exists(vs, b) => {
            out.extend(vs.iter().filter_map(|v| v.sort.clone()));
            collect_var_sorts(b, out);
        }
        FoFormula::Not(a) => collect_var_sorts(a, out),
        FoFormula::And(v) | FoFormula::Or(v) => v.iter().for_each(|g| collect_var_sorts(g, out)),
        FoFormula::Implies(a, b) | FoFormula::Iff(a, b) => {
            collect_var_sorts(a, out);
            collect_var_sorts(b, out);
        }
        _ => {}
    }
}

//! Finite standard models, found by brute force.
//!
//! Base types get domains of size at most 3 and function types the full
//! function space. An element of `α → β` is an index whose base-`|β|` digit
//! at position `a` is its value at `a`. Constants are assigned by
//! backtracking, and each formula is checked as soon as all its constants
//! have values. This is a desk-scale test oracle. It refuses rather than
//! guess when domains or work grow too large.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::clause::Clause;
use crate::term::{logic, Name, Node, Term, Type};

#[derive(Clone, Debug)]
pub struct OracleLimits {
    /// Largest domain tried for each base type, at most 3.
    pub max_size: u64,
    /// Largest domain of a constant's type that is still enumerated.
    pub max_domain: u64,
    /// Evaluation steps before giving up.
    pub max_steps: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_size: 3,
            max_domain: 1 << 16,
            max_steps: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Model(Model),
    /// No model with domains within the size bound.
    NoModel,
    Refused(String),
}

impl Verdict {
    pub fn model(&self) -> Option<&Model> {
        match self {
            Verdict::Model(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    /// Domain size of each base type (`$o` is always 2).
    pub sizes: BTreeMap<Type, u64>,
    pub values: BTreeMap<Name, (Type, u64)>,
}

#[derive(Debug)]
struct Refuse(String);

fn type_size(sizes: &BTreeMap<Type, u64>, ty: &Type) -> Option<u64> {
    match ty {
        Type::O => Some(2),
        Type::Fun(a, b) => {
            let (a, b) = (type_size(sizes, a)?, type_size(sizes, b)?);
            if b == 1 {
                return Some(1);
            }
            b.checked_pow(u32::try_from(a).ok()?).filter(|n| *n < 1 << 62)
        }
        _ => Some(*sizes.get(ty).unwrap_or(&1)),
    }
}

fn logical_arity(name: &str) -> usize {
    match name {
        logic::TRUE | logic::FALSE => 0,
        logic::NOT | logic::FORALL | logic::EXISTS => 1,
        _ => 2,
    }
}

struct Eval<'a> {
    sizes: &'a BTreeMap<Type, u64>,
    values: &'a HashMap<Name, u64>,
    steps: u64,
    max_steps: u64,
}

impl Eval<'_> {
    fn size(&self, ty: &Type) -> Result<u64, Refuse> {
        type_size(self.sizes, ty).ok_or_else(|| Refuse(format!("domain of {ty} too large")))
    }

    fn tick(&mut self) -> Result<(), Refuse> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(Refuse("step limit reached".into()));
        }
        Ok(())
    }

    /// Value of `f : α → β` at `a`.
    fn apply(&self, f: u64, f_ty: &Type, a: u64) -> Result<u64, Refuse> {
        let b = self.size(f_ty.codomain().expect("function type"))?;
        Ok((f / b.pow(a as u32)) % b)
    }

    fn eval(&mut self, t: &Term, env: &mut Vec<u64>) -> Result<u64, Refuse> {
        self.tick()?;
        let (h, args) = t.spine();
        if let Node::Const(n, ty) = h.node() {
            if logic::is_logical(n) {
                if args.len() >= logical_arity(n) {
                    return self.eval_logical(n, ty, &args, env);
                }
                // partial application: evaluate the η-expansion
                let mut expanded = h.clone();
                let (doms, _) = ty.split();
                let k = doms.len() as u32;
                let mut body = h.clone();
                for (i, d) in doms.iter().enumerate() {
                    body = Term::app(body, Term::bound(k - 1 - i as u32, d.clone()));
                }
                for d in doms.iter().rev() {
                    body = Term::abs(d.clone(), body);
                }
                if k > 0 {
                    expanded = body;
                }
                let mut v = self.eval(&expanded, env)?;
                let mut vty = ty.clone();
                for a in args {
                    let x = self.eval(a, env)?;
                    v = self.apply(v, &vty, x)?;
                    vty = vty.codomain().expect("function type").clone();
                }
                return Ok(v);
            }
        }
        let (mut v, mut vty) = match h.node() {
            Node::Const(n, ty) | Node::Free(n, ty) => (
                *self.values.get(n).ok_or_else(|| Refuse(format!("no value for {n}")))?,
                ty.clone(),
            ),
            Node::Bound(i, ty) => (env[env.len() - 1 - *i as usize], ty.clone()),
            Node::Abs(ty, body) => {
                let n = self.size(ty)?;
                let body_ty = h.ty();
                let m = self.size(body_ty.codomain().expect("function type"))?;
                let mut v = 0u64;
                let mut place = 1u64;
                for x in 0..n {
                    env.push(x);
                    let r = self.eval(body, env);
                    env.pop();
                    v += r? * place;
                    place = place.saturating_mul(m);
                }
                (v, body_ty)
            }
            Node::App(..) => unreachable!("spine head is not an application"),
        };
        for a in args {
            let x = self.eval(a, env)?;
            v = self.apply(v, &vty, x)?;
            vty = vty.codomain().expect("function type").clone();
        }
        Ok(v)
    }

    fn eval_logical(&mut self, n: &str, ty: &Type, args: &[&Term], env: &mut Vec<u64>) -> Result<u64, Refuse> {
        let k = logical_arity(n);
        let v = match n {
            logic::TRUE => 1,
            logic::FALSE => 0,
            logic::NOT => 1 - self.eval(args[0], env)?,
            logic::AND => {
                if self.eval(args[0], env)? == 0 {
                    0
                } else {
                    self.eval(args[1], env)?
                }
            }
            logic::OR => {
                if self.eval(args[0], env)? == 1 {
                    1
                } else {
                    self.eval(args[1], env)?
                }
            }
            logic::IMP => {
                if self.eval(args[0], env)? == 0 {
                    1
                } else {
                    self.eval(args[1], env)?
                }
            }
            logic::IFF => u64::from(self.eval(args[0], env)? == self.eval(args[1], env)?),
            logic::EQ => u64::from(self.eval(args[0], env)? == self.eval(args[1], env)?),
            logic::FORALL | logic::EXISTS => {
                let dom = ty.domain().and_then(Type::domain).expect("quantifier type").clone();
                let want = u64::from(n == logic::EXISTS);
                let size = self.size(&dom)?;
                let mut result = 1 - want;
                for x in 0..size {
                    let r = match args[0].node() {
                        Node::Abs(_, body) => {
                            env.push(x);
                            let r = self.eval(body, env);
                            env.pop();
                            r?
                        }
                        _ => {
                            let p = self.eval(args[0], env)?;
                            self.apply(p, &Type::predicate(dom.clone()), x)?
                        }
                    };
                    if r == want {
                        result = want;
                        break;
                    }
                }
                result
            }
            _ => unreachable!("not a logical constant"),
        };
        // surplus arguments (only possible for equality at function type
        // results, which are booleans, so none in well-typed terms)
        debug_assert!(args.len() == k);
        Ok(v)
    }
}

/// Is `v : (α → o) → α` a choice function on a domain of size `n`?
fn is_choice(v: u64, n: u64) -> bool {
    let preds = 1u64 << n;
    (1..preds).all(|p| {
        let w = (v / n.pow(p as u32)) % n;
        (p >> w) & 1 == 1
    })
}

fn base_types_of(formulas: &[Term], out: &mut BTreeSet<Type>) {
    for f in formulas {
        f.visit(&mut |t, _| {
            let ty = match t.node() {
                Node::Const(_, ty) | Node::Free(_, ty) | Node::Bound(_, ty) | Node::Abs(ty, _) => ty.clone(),
                Node::App(..) => return,
            };
            let mut bs = Vec::new();
            ty.base_types(&mut bs);
            out.extend(bs.into_iter().filter(|b| *b != Type::O));
        });
    }
}

fn constants_of(f: &Term) -> BTreeSet<(Name, Type)> {
    let mut cs = BTreeSet::new();
    f.constants(&mut cs);
    cs.retain(|(n, _)| !logic::is_logical(n));
    cs
}

struct Search<'a> {
    sizes: BTreeMap<Type, u64>,
    order: Vec<(Name, Type)>,
    /// Formulas whose last constant is at each position; index 0 holds
    /// those that need no new constant.
    checks: Vec<Vec<&'a Term>>,
    choice: &'a BTreeSet<Name>,
    values: HashMap<Name, u64>,
    max_steps: u64,
    max_domain: u64,
    steps: u64,
}

impl Search<'_> {
    fn holds(&mut self, f: &Term) -> Result<bool, Refuse> {
        let mut ev = Eval {
            sizes: &self.sizes,
            values: &self.values,
            steps: self.steps,
            max_steps: self.max_steps,
        };
        let r = ev.eval(f, &mut Vec::new());
        self.steps = ev.steps;
        Ok(r? == 1)
    }

    fn run(&mut self, k: usize) -> Result<bool, Refuse> {
        for f in self.checks[k].clone() {
            if !self.holds(f)? {
                return Ok(false);
            }
        }
        if k == self.order.len() {
            return Ok(true);
        }
        let (name, ty) = self.order[k].clone();
        let n = type_size(&self.sizes, &ty)
            .filter(|n| *n <= self.max_domain)
            .ok_or_else(|| Refuse(format!("cannot enumerate {name}: {ty}")))?;
        let choice = self
            .choice
            .contains(&name)
            .then(|| ty.choice_elem().and_then(|a| type_size(&self.sizes, a)))
            .flatten();
        for v in 0..n {
            if choice.is_some_and(|a| !is_choice(v, a)) {
                continue;
            }
            self.steps += 1;
            self.values.insert(name.clone(), v);
            if self.run(k + 1)? {
                return Ok(true);
            }
        }
        self.values.remove(&name);
        Ok(false)
    }
}

/// Searches for an interpretation of the constants of `formulas` not in
/// `fixed` that makes all of them true, with the given base domain sizes.
fn search_at(
    sizes: &BTreeMap<Type, u64>,
    formulas: &[Term],
    fixed: &HashMap<Name, u64>,
    choice: &BTreeSet<Name>,
    limits: &OracleLimits,
    steps: &mut u64,
) -> Result<Option<HashMap<Name, u64>>, Refuse> {
    // order constants greedily so small formulas are checked early
    let mut by_size: Vec<(&Term, BTreeSet<(Name, Type)>)> = formulas
        .iter()
        .map(|f| {
            let mut cs = constants_of(f);
            cs.retain(|(n, _)| !fixed.contains_key(n));
            (f, cs)
        })
        .collect();
    by_size.sort_by_key(|(f, cs)| (cs.len(), f.size()));
    let mut order: Vec<(Name, Type)> = Vec::new();
    let mut checks: Vec<Vec<&Term>> = vec![Vec::new()];
    for (f, cs) in &by_size {
        for c in cs {
            if !order.contains(c) {
                order.push(c.clone());
                checks.push(Vec::new());
            }
        }
        let last = cs
            .iter()
            .map(|c| order.iter().position(|o| o == c).unwrap() + 1)
            .max()
            .unwrap_or(0);
        checks[last].push(f);
    }
    let mut s = Search {
        sizes: sizes.clone(),
        order,
        checks,
        choice,
        values: fixed.clone(),
        max_steps: limits.max_steps,
        max_domain: limits.max_domain,
        steps: *steps,
    };
    let found = s.run(0);
    *steps = s.steps;
    Ok(if found? { Some(s.values) } else { None })
}

fn size_vectors(n: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (1..=max).map(move |s| [v.clone(), vec![s]].concat()))
            .collect();
    }
    out.sort_by_key(|v| (v.iter().sum::<u64>(), v.clone()));
    out
}

/// Looks for a standard model of closed formulas with every base domain of
/// size at most `limits.max_size`. Constants in `choice` are interpreted
/// as genuine choice functions.
pub fn find_model(formulas: &[Term], choice: &BTreeSet<Name>, limits: &OracleLimits) -> Verdict {
    let mut bases = BTreeSet::new();
    base_types_of(formulas, &mut bases);
    let bases: Vec<Type> = bases.into_iter().collect();
    let mut steps = 0;
    let mut refused = None;
    for v in size_vectors(bases.len(), limits.max_size.min(3)) {
        let sizes: BTreeMap<Type, u64> = bases.iter().cloned().zip(v).collect();
        match search_at(&sizes, formulas, &HashMap::new(), choice, limits, &mut steps) {
            Ok(Some(values)) => return Verdict::Model(Model::from_values(sizes, values, formulas)),
            Ok(None) => {}
            Err(Refuse(why)) => {
                // larger domains only get harder
                refused = Some(why);
                break;
            }
        }
    }
    match refused {
        Some(why) => Verdict::Refused(why),
        None => Verdict::NoModel,
    }
}

/// Clause-level entry: the clauses are read as their universal closures.
pub fn finite_model_oracle(clauses: &[Clause], choice: &BTreeSet<Name>, limits: &OracleLimits) -> Verdict {
    let fs: Vec<Term> = clauses.iter().map(Clause::to_formula).collect();
    find_model(&fs, choice, limits)
}

impl Model {
    fn from_values(sizes: BTreeMap<Type, u64>, values: HashMap<Name, u64>, formulas: &[Term]) -> Model {
        let mut types: BTreeMap<Name, Type> = BTreeMap::new();
        for f in formulas {
            for (n, t) in constants_of(f) {
                types.insert(n, t);
            }
        }
        let values = values
            .into_iter()
            .filter_map(|(n, v)| types.get(&n).map(|t| (n.clone(), (t.clone(), v))))
            .collect();
        Model { sizes, values }
    }

    fn value_map(&self) -> HashMap<Name, u64> {
        self.values.iter().map(|(n, (_, v))| (n.clone(), *v)).collect()
    }

    /// Value of constant `name` at the given arguments, with elements and
    /// truth values as indices. `None` for unknown constants, too many
    /// arguments, or domains too large to index.
    pub fn lookup(&self, name: &str, args: &[u64]) -> Option<u64> {
        let (ty, mut v) = self.values.get(name)?.clone();
        let mut ty = &ty;
        for &a in args {
            let Type::Fun(dom, cod) = ty else { return None };
            if a >= type_size(&self.sizes, dom)? {
                return None;
            }
            let b = type_size(&self.sizes, cod)?;
            v = (v / b.checked_pow(u32::try_from(a).ok()?)?) % b;
            ty = cod;
        }
        Some(v)
    }

    /// Truth value of a closed formula. `None` when evaluation would
    /// exceed the limits or a constant has no value.
    pub fn eval(&self, formula: &Term) -> Option<bool> {
        let values = self.value_map();
        let mut ev = Eval {
            sizes: &self.sizes,
            values: &values,
            steps: 0,
            max_steps: OracleLimits::default().max_steps,
        };
        ev.eval(formula, &mut Vec::new()).ok().map(|v| v == 1)
    }

    /// Can the model be extended, by interpreting constants it does not
    /// know, so that every formula holds? Base domains stay fixed.
    pub fn extends_to(&self, formulas: &[Term], choice: &BTreeSet<Name>, limits: &OracleLimits) -> Verdict {
        let mut bases = BTreeSet::new();
        base_types_of(formulas, &mut bases);
        let mut sizes = self.sizes.clone();
        for b in bases {
            sizes.entry(b).or_insert(1);
        }
        let mut steps = 0;
        match search_at(&sizes, formulas, &self.value_map(), choice, limits, &mut steps) {
            Ok(Some(values)) => {
                let mut m = Model::from_values(sizes, values, formulas);
                for (n, v) in &self.values {
                    m.values.entry(n.clone()).or_insert_with(|| v.clone());
                }
                Verdict::Model(m)
            }
            Ok(None) => Verdict::NoModel,
            Err(Refuse(why)) => Verdict::Refused(why),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(|(t, n)| format!("|{t}|={n}")).collect();
        write!(f, "{}", sizes.join(" "))?;
        for (n, (ty, v)) in &self.values {
            write!(f, "; {n}:{ty}={v}")?;
        }
        Ok(())
    }
}

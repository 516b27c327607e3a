//! Simply-typed λ-terms with nameless bound variables.
//!
//! Bound variables are de Bruijn indices that carry their own type, so the
//! type of any closed subterm is computable without a context. Free
//! variables and constants are named. Logical connectives and quantifiers
//! are ordinary constants with reserved names (see [`logic`]).

mod normalize;
pub mod print;
mod subst;
mod types;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use normalize::{beta_normalize, beta_normalize_applicative};
pub use print::TermDisplay;
pub use subst::Substitution;
pub use types::{Name, Type};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("ill-typed application in `{term}`: function of type {fun_ty} applied to argument of type {arg_ty}")]
    BadApplication { term: String, fun_ty: Type, arg_ty: Type },
    #[error("bound variable index {index} out of scope in `{term}`")]
    UnboundIndex { term: String, index: u32 },
    #[error("bound variable {index} annotated {annotated} but binder has type {binder}")]
    BoundTypeMismatch { index: u32, annotated: Type, binder: Type },
    #[error("substitution binds {var}:{expected} to a term of type {found}")]
    SubstTypeMismatch { var: Name, expected: Type, found: Type },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Node {
    Const(Name, Type),
    Free(Name, Type),
    /// de Bruijn index; 0 is the innermost binder.
    Bound(u32, Type),
    Abs(Type, Term),
    App(Term, Term),
}

/// An immutable, shareable term. Structural equality is α-equivalence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Arc<Node>);

/// Reserved names of the logical constants.
pub mod logic {
    pub const NOT: &str = "$not";
    pub const AND: &str = "$and";
    pub const OR: &str = "$or";
    pub const IMP: &str = "$imp";
    pub const IFF: &str = "$iff";
    pub const TRUE: &str = "$true";
    pub const FALSE: &str = "$false";
    pub const EQ: &str = "=";
    pub const FORALL: &str = "$forall";
    pub const EXISTS: &str = "$exists";

    pub const ALL: [&str; 10] = [NOT, AND, OR, IMP, IFF, TRUE, FALSE, EQ, FORALL, EXISTS];

    pub fn is_logical(name: &str) -> bool {
        ALL.contains(&name)
    }
}

/// A typed free variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var {
    pub name: Name,
    pub ty: Type,
}

impl Var {
    pub fn new(name: impl Into<Name>, ty: Type) -> Var {
        Var { name: name.into(), ty }
    }

    pub fn term(&self) -> Term {
        Term::free(self.name.clone(), self.ty.clone())
    }
}

#[allow(clippy::should_implement_trait)]
impl Term {
    fn mk(node: Node) -> Term {
        Term(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(name: impl Into<Name>, ty: Type) -> Term {
        Term::mk(Node::Const(name.into(), ty))
    }

    pub fn free(name: impl Into<Name>, ty: Type) -> Term {
        Term::mk(Node::Free(name.into(), ty))
    }

    pub fn bound(index: u32, ty: Type) -> Term {
        Term::mk(Node::Bound(index, ty))
    }

    /// Raw abstraction over an already de-Bruijn-shifted body.
    pub fn abs(binder: Type, body: Term) -> Term {
        Term::mk(Node::Abs(binder, body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::mk(Node::App(f, a))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Abstracts the named free variable: `λx. t[x := Bound 0]`.
    pub fn lambda(var: &Var, body: &Term) -> Term {
        Term::abs(var.ty.clone(), body.abstract_free(&var.name, 0))
    }

    // ---- logical constants ----

    pub fn top() -> Term {
        Term::constant(logic::TRUE, Type::O)
    }

    pub fn bot() -> Term {
        Term::constant(logic::FALSE, Type::O)
    }

    pub fn not_const() -> Term {
        Term::constant(logic::NOT, Type::fun(Type::O, Type::O))
    }

    pub fn binop_const(name: &str) -> Term {
        Term::constant(name, Type::curried([Type::O, Type::O], Type::O))
    }

    pub fn eq_const(ty: Type) -> Term {
        Term::constant(logic::EQ, Type::curried([ty.clone(), ty], Type::O))
    }

    pub fn quant_const(name: &str, ty: Type) -> Term {
        Term::constant(name, Type::fun(Type::predicate(ty), Type::O))
    }

    pub fn not(t: Term) -> Term {
        Term::app(Term::not_const(), t)
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::apps(Term::binop_const(logic::AND), [a, b])
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::apps(Term::binop_const(logic::OR), [a, b])
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::apps(Term::binop_const(logic::IMP), [a, b])
    }

    pub fn iff(a: Term, b: Term) -> Term {
        Term::apps(Term::binop_const(logic::IFF), [a, b])
    }

    pub fn eq(a: Term, b: Term) -> Term {
        let ty = a.ty();
        Term::apps(Term::eq_const(ty), [a, b])
    }

    /// `∀` applied to a predicate (usually an abstraction).
    pub fn forall_pred(pred: Term) -> Term {
        let ty = pred.ty().domain().cloned().expect("quantifier over non-predicate");
        Term::app(Term::quant_const(logic::FORALL, ty), pred)
    }

    pub fn exists_pred(pred: Term) -> Term {
        let ty = pred.ty().domain().cloned().expect("quantifier over non-predicate");
        Term::app(Term::quant_const(logic::EXISTS, ty), pred)
    }

    /// `∀x. body` where `x` occurs free in `body` by name.
    pub fn forall(var: &Var, body: &Term) -> Term {
        Term::forall_pred(Term::lambda(var, body))
    }

    pub fn exists(var: &Var, body: &Term) -> Term {
        Term::exists_pred(Term::lambda(var, body))
    }

    // ---- inspection ----

    pub fn is_abs(&self) -> bool {
        matches!(self.node(), Node::Abs(..))
    }

    pub fn as_const(&self) -> Option<(&Name, &Type)> {
        match self.node() {
            Node::Const(n, t) => Some((n, t)),
            _ => None,
        }
    }

    pub fn as_free(&self) -> Option<(&Name, &Type)> {
        match self.node() {
            Node::Free(n, t) => Some((n, t)),
            _ => None,
        }
    }

    pub fn is_const_named(&self, name: &str) -> bool {
        matches!(self.node(), Node::Const(n, _) if n.as_ref() == name)
    }

    /// Splits an application spine into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Node::App(f, a) = t.node() {
            args.push(a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn head(&self) -> &Term {
        let mut t = self;
        while let Node::App(f, _) = t.node() {
            t = f;
        }
        t
    }

    /// Head is a free variable (after stripping abstractions).
    pub fn is_flex(&self) -> bool {
        let mut t = self;
        while let Node::Abs(_, b) = t.node() {
            t = b;
        }
        matches!(t.head().node(), Node::Free(..))
    }

    /// If the head is a logical constant applied to exactly `n` arguments,
    /// returns them.
    pub fn logical_args(&self, name: &str, n: usize) -> Option<Vec<&Term>> {
        let (h, args) = self.spine();
        if h.is_const_named(name) && args.len() == n {
            Some(args)
        } else {
            None
        }
    }

    /// `(lhs, rhs)` if this is a saturated primitive equation.
    pub fn as_eq(&self) -> Option<(&Term, &Term)> {
        self.logical_args(logic::EQ, 2).map(|a| (a[0], a[1]))
    }

    /// Type of a well-typed term. Panics on ill-typed input; use
    /// [`Term::type_of`] for checked typing.
    pub fn ty(&self) -> Type {
        match self.node() {
            Node::Const(_, t) | Node::Free(_, t) | Node::Bound(_, t) => t.clone(),
            Node::Abs(d, b) => Type::fun(d.clone(), b.ty()),
            Node::App(f, _) => match f.ty() {
                Type::Fun(_, c) => c.as_ref().clone(),
                other => panic!("application of non-function of type {other}"),
            },
        }
    }

    /// Checked typing. `ctx` lists the binder types of loose bound
    /// variables, innermost first.
    pub fn type_of(&self, ctx: &[Type]) -> Result<Type, TermError> {
        let mut stack = ctx.to_vec();
        stack.reverse();
        self.type_in(&mut stack)
    }

    fn type_in(&self, ctx: &mut Vec<Type>) -> Result<Type, TermError> {
        match self.node() {
            Node::Const(_, t) | Node::Free(_, t) => Ok(t.clone()),
            Node::Bound(i, t) => {
                let idx = ctx
                    .len()
                    .checked_sub(*i as usize + 1)
                    .ok_or_else(|| TermError::UnboundIndex {
                        term: self.to_string(),
                        index: *i,
                    })?;
                if &ctx[idx] != t {
                    return Err(TermError::BoundTypeMismatch {
                        index: *i,
                        annotated: t.clone(),
                        binder: ctx[idx].clone(),
                    });
                }
                Ok(t.clone())
            }
            Node::Abs(d, b) => {
                ctx.push(d.clone());
                let r = b.type_in(ctx);
                ctx.pop();
                Ok(Type::fun(d.clone(), r?))
            }
            Node::App(f, a) => {
                let ft = f.type_in(ctx)?;
                let at = a.type_in(ctx)?;
                match &ft {
                    Type::Fun(d, c) if **d == at => Ok(c.as_ref().clone()),
                    _ => Err(TermError::BadApplication {
                        term: self.to_string(),
                        fun_ty: ft,
                        arg_ty: at,
                    }),
                }
            }
        }
    }

    /// Number of symbol occurrences (constants, variables), abstractions
    /// counted once each.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(..) | Node::Free(..) | Node::Bound(..) => 1,
            Node::Abs(_, b) => 1 + b.size(),
            Node::App(f, a) => f.size() + a.size(),
        }
    }

    /// Names of free variables.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.free_var_set().into_iter().map(|v| v.name).collect()
    }

    /// Typed free variables.
    pub fn free_var_set(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_var_list(&self, out: &mut Vec<Var>) {
        match self.node() {
            Node::Free(n, t) => {
                if !out.iter().any(|v| &v.name == n && &v.ty == t) {
                    out.push(Var::new(n.clone(), t.clone()));
                }
            }
            Node::Abs(_, b) => b.free_var_list(out),
            Node::App(f, a) => {
                f.free_var_list(out);
                a.free_var_list(out);
            }
            _ => {}
        }
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self.node() {
            Node::Free(n, t) => {
                out.insert(Var::new(n.clone(), t.clone()));
            }
            Node::Abs(_, b) => b.collect_free(out),
            Node::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
            _ => {}
        }
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self.node() {
            Node::Free(n, _) => n.as_ref() == name,
            Node::Abs(_, b) => b.has_free(name),
            Node::App(f, a) => f.has_free(name) || a.has_free(name),
            _ => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self.node() {
            Node::Free(..) => false,
            Node::Abs(_, b) => b.is_ground(),
            Node::App(f, a) => f.is_ground() && a.is_ground(),
            _ => true,
        }
    }

    /// Constants occurring in the term (logical ones included).
    pub fn constants(&self, out: &mut BTreeSet<(Name, Type)>) {
        match self.node() {
            Node::Const(n, t) => {
                out.insert((n.clone(), t.clone()));
            }
            Node::Abs(_, b) => b.constants(out),
            Node::App(f, a) => {
                f.constants(out);
                a.constants(out);
            }
            _ => {}
        }
    }

    /// Does any bound index `>= depth` escape this term?
    pub fn has_loose_bvars_from(&self, depth: u32) -> bool {
        match self.node() {
            Node::Bound(i, _) => *i >= depth,
            Node::Abs(_, b) => b.has_loose_bvars_from(depth + 1),
            Node::App(f, a) => f.has_loose_bvars_from(depth) || a.has_loose_bvars_from(depth),
            _ => false,
        }
    }

    pub fn has_loose_bvars(&self) -> bool {
        self.has_loose_bvars_from(0)
    }

    /// Does loose bound index `index` occur?
    pub fn has_loose_bvar(&self, index: u32) -> bool {
        match self.node() {
            Node::Bound(i, _) => *i == index,
            Node::Abs(_, b) => b.has_loose_bvar(index + 1),
            Node::App(f, a) => f.has_loose_bvar(index) || a.has_loose_bvar(index),
            _ => false,
        }
    }

    pub fn contains_abs(&self) -> bool {
        match self.node() {
            Node::Abs(..) => true,
            Node::App(f, a) => f.contains_abs() || a.contains_abs(),
            _ => false,
        }
    }

    /// Shifts loose bound indices `>= cutoff` by `delta`.
    pub fn shift(&self, delta: i64, cutoff: u32) -> Term {
        if delta == 0 || !self.has_loose_bvars_from(cutoff) {
            return self.clone();
        }
        match self.node() {
            Node::Bound(i, t) if *i >= cutoff => {
                let ni = *i as i64 + delta;
                assert!(ni >= 0, "negative de Bruijn index after shift");
                Term::bound(ni as u32, t.clone())
            }
            Node::Abs(d, b) => Term::abs(d.clone(), b.shift(delta, cutoff + 1)),
            Node::App(f, a) => Term::app(f.shift(delta, cutoff), a.shift(delta, cutoff)),
            _ => self.clone(),
        }
    }

    /// Substitutes `arg` for bound index `depth` (with loose indices above
    /// it decremented). Used for β-reduction with `depth = 0`.
    pub fn instantiate_at(&self, depth: u32, arg: &Term) -> Term {
        if !self.has_loose_bvars_from(depth) {
            return self.clone();
        }
        match self.node() {
            Node::Bound(i, t) => {
                if *i == depth {
                    arg.shift(depth as i64, 0)
                } else if *i > depth {
                    Term::bound(i - 1, t.clone())
                } else {
                    self.clone()
                }
            }
            Node::Abs(d, b) => Term::abs(d.clone(), b.instantiate_at(depth + 1, arg)),
            Node::App(f, a) => Term::app(f.instantiate_at(depth, arg), a.instantiate_at(depth, arg)),
            _ => self.clone(),
        }
    }

    /// Body of an abstraction instantiated with `arg` (one β-step, not
    /// normalized).
    pub fn instantiate(&self, arg: &Term) -> Term {
        self.instantiate_at(0, arg)
    }

    /// Replaces free variable `name` by bound index `depth`.
    pub fn abstract_free(&self, name: &str, depth: u32) -> Term {
        match self.node() {
            Node::Free(n, t) if n.as_ref() == name => Term::bound(depth, t.clone()),
            Node::Abs(d, b) => Term::abs(d.clone(), b.abstract_free(name, depth + 1)),
            Node::App(f, a) => Term::app(f.abstract_free(name, depth), a.abstract_free(name, depth)),
            _ => self.clone(),
        }
    }

    /// Renames free variables by a total function on names.
    pub fn rename_free(&self, f: &dyn Fn(&Name, &Type) -> Option<Name>) -> Term {
        match self.node() {
            Node::Free(n, t) => match f(n, t) {
                Some(m) => Term::free(m, t.clone()),
                None => self.clone(),
            },
            Node::Abs(d, b) => Term::abs(d.clone(), b.rename_free(f)),
            Node::App(a, b) => Term::app(a.rename_free(f), b.rename_free(f)),
            _ => self.clone(),
        }
    }

    /// Replaces every occurrence of constant `name` with `replacement`
    /// (which must be closed). The result is not normalized.
    pub fn replace_const(&self, name: &str, replacement: &Term) -> Term {
        match self.node() {
            Node::Const(n, _) if n.as_ref() == name => replacement.clone(),
            Node::Abs(d, b) => Term::abs(d.clone(), b.replace_const(name, replacement)),
            Node::App(f, a) => Term::app(f.replace_const(name, replacement), a.replace_const(name, replacement)),
            _ => self.clone(),
        }
    }

    /// Visits every subterm (pre-order) together with its binder depth.
    pub fn visit(&self, f: &mut dyn FnMut(&Term, u32)) {
        self.visit_at(0, f)
    }

    fn visit_at(&self, depth: u32, f: &mut dyn FnMut(&Term, u32)) {
        f(self, depth);
        match self.node() {
            Node::Abs(_, b) => b.visit_at(depth + 1, f),
            Node::App(a, b) => {
                a.visit_at(depth, f);
                b.visit_at(depth, f);
            }
            _ => {}
        }
    }

    pub fn any_subterm(&self, pred: &dyn Fn(&Term) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self.node() {
            Node::Abs(_, b) => b.any_subterm(pred),
            Node::App(f, a) => f.any_subterm(pred) || a.any_subterm(pred),
            _ => false,
        }
    }

    /// Does a logical constant occur anywhere?
    pub fn has_logical(&self) -> bool {
        self.any_subterm(&|t| matches!(t.node(), Node::Const(n, _) if logic::is_logical(n)))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Generator of fresh names. Single-owner; clone to fork.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn new() -> Fresh {
        Fresh::default()
    }

    pub fn starting_at(next: u64) -> Fresh {
        Fresh { next }
    }

    pub fn next_id(&mut self) -> u64 {
        let n = self.next;
        self.next += 1;
        n
    }

    pub fn name(&mut self, prefix: &str) -> Name {
        format!("{prefix}{}", self.next_id()).into()
    }

    /// Moves past every `<prefix><n>` among `names`, so later names cannot
    /// collide with them.
    pub fn avoid<'a>(&mut self, prefix: &str, names: impl IntoIterator<Item = &'a str>) {
        for n in names {
            if let Some(k) = n.strip_prefix(prefix).and_then(|r| r.parse::<u64>().ok()) {
                self.next = self.next.max(k + 1);
            }
        }
    }

    pub fn peek(&self) -> u64 {
        self.next
    }
}

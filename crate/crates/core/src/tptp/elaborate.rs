//! Typing of parsed statements into closed terms.

use std::collections::HashSet;
use std::path::PathBuf;

use super::lexer::tokenize;
use super::parser::{Ast, BinOp, ConnTerm, FormulaBody, Parser, Pos, Quant, Statement, TypeAst};
use super::{is_reserved_name, AnnotatedFormula, Language, ParseError, Problem, Role};
use crate::term::{logic, Name, Term, Type};

const MAX_INCLUDE_DEPTH: usize = 16;

pub struct Elaborator {
    base_dir: PathBuf,
    problem: Problem,
    active_includes: Vec<PathBuf>,
}

struct Ctx<'a> {
    formula: &'a str,
    /// Bound variables, innermost last.
    vars: Vec<(String, Type)>,
}

impl Elaborator {
    pub fn new(base_dir: PathBuf) -> Elaborator {
        Elaborator {
            base_dir,
            problem: Problem::default(),
            active_includes: Vec::new(),
        }
    }

    pub fn finish(self) -> Problem {
        self.problem
    }

    pub fn run(&mut self, text: &str, selection: Option<&[String]>) -> Result<(), ParseError> {
        let toks = tokenize(text)?;
        let stmts = Parser::new(toks).statements()?;
        let wanted: Option<HashSet<&str>> = selection.map(|s| s.iter().map(String::as_str).collect());
        for st in stmts {
            match st {
                Statement::Include { file, selection, .. } => self.include(&file, selection.as_deref())?,
                Statement::Formula {
                    lang,
                    name,
                    role,
                    body,
                    pos,
                } => {
                    if let Some(w) = &wanted {
                        if !w.contains(name.as_str()) {
                            continue;
                        }
                    }
                    self.statement(lang, name, role, body, pos)?;
                }
            }
        }
        Ok(())
    }

    fn include(&mut self, file: &str, selection: Option<&[String]>) -> Result<(), ParseError> {
        let mut candidates = vec![self.base_dir.join(file)];
        if let Ok(root) = std::env::var("TPTP") {
            candidates.push(PathBuf::from(root).join(file));
        }
        let path = candidates
            .into_iter()
            .find(|p| p.is_file())
            .ok_or_else(|| ParseError::UnknownInclude(file.to_string()))?;
        let canon = path.canonicalize().unwrap_or_else(|_| path.clone());
        if self.active_includes.contains(&canon) || self.active_includes.len() >= MAX_INCLUDE_DEPTH {
            return Err(ParseError::IncludeCycle(file.to_string()));
        }
        let text = std::fs::read_to_string(&path).map_err(|source| ParseError::Io {
            path: path.clone(),
            source,
        })?;
        self.active_includes.push(canon);
        let r = self.run(&text, selection).map_err(|e| match e {
            e @ (ParseError::InFile { .. } | ParseError::UnknownInclude(_) | ParseError::IncludeCycle(_)) => e,
            e => ParseError::InFile {
                file: file.to_string(),
                inner: Box::new(e),
            },
        });
        self.active_includes.pop();
        r
    }

    fn statement(
        &mut self,
        lang: Language,
        name: String,
        role: String,
        body: FormulaBody,
        pos: Pos,
    ) -> Result<(), ParseError> {
        match body {
            FormulaBody::TypeDecl(sym, ty) => {
                if let TypeAst::Name(n) = &ty {
                    if n == "$tType" {
                        let sym: Name = sym.into();
                        if !self.problem.base_types.contains(&sym) {
                            self.problem.base_types.push(sym);
                        }
                        return Ok(());
                    }
                }
                let t = self.ty(&ty, &name, pos)?;
                self.declare(&sym, t, &name, pos)
            }
            FormulaBody::Formula(ast) => {
                let mut ctx = Ctx {
                    formula: &name,
                    vars: Vec::new(),
                };
                let term = if lang == Language::Thf {
                    let t = self.thf(&ast, &mut ctx)?;
                    if t.ty() != Type::O {
                        return Err(type_err(&name, pos, format!("formula has type {}, not $o", t.ty())));
                    }
                    t
                } else {
                    // Free variables in FOF/CNF are implicitly universal.
                    let mut free = Vec::new();
                    collect_unbound(&ast, &mut Vec::new(), &mut free);
                    for v in &free {
                        ctx.vars.push((v.clone(), Type::Iota));
                    }
                    let mut t = self.fo_formula(&ast, &mut ctx)?;
                    for _ in &free {
                        t = Term::forall_pred(Term::abs(Type::Iota, t));
                    }
                    t
                };
                debug_assert!(!term.has_loose_bvars());
                if term.type_of(&[]).is_err() {
                    // Should be unreachable; keep the diagnostic structured.
                    return Err(type_err(&name, pos, "internal typing failure".into()));
                }
                self.problem.formulas.push(AnnotatedFormula {
                    name,
                    role: Role::parse(&role),
                    formula: term,
                    language: lang,
                });
                Ok(())
            }
        }
    }

    fn declare(&mut self, sym: &str, ty: Type, formula: &str, pos: Pos) -> Result<(), ParseError> {
        if is_reserved_name(sym) {
            return Err(type_err(formula, pos, format!("`{sym}` uses a reserved name")));
        }
        self.declare_unchecked(sym, ty, formula, pos)
    }

    fn declare_unchecked(&mut self, sym: &str, ty: Type, formula: &str, pos: Pos) -> Result<(), ParseError> {
        if logic::is_logical(sym) || sym.starts_with('$') {
            return Err(type_err(formula, pos, format!("cannot redeclare `{sym}`")));
        }
        match self.problem.signature.get(sym) {
            Some(old) if *old != ty => Err(type_err(
                formula,
                pos,
                format!("`{sym}` redeclared with type {ty}, previously {old}"),
            )),
            _ => {
                self.problem.signature.insert(sym.into(), ty);
                Ok(())
            }
        }
    }

    fn ty(&self, t: &TypeAst, formula: &str, pos: Pos) -> Result<Type, ParseError> {
        match t {
            TypeAst::Fun(a, b) => Ok(Type::fun(self.ty(a, formula, pos)?, self.ty(b, formula, pos)?)),
            TypeAst::Name(n) => match n.as_str() {
                "$i" => Ok(Type::Iota),
                "$o" => Ok(Type::O),
                other => {
                    if self.problem.base_types.iter().any(|b| b.as_ref() == other) {
                        Ok(Type::Base(other.into()))
                    } else {
                        Err(type_err(formula, pos, format!("unknown type `{other}`")))
                    }
                }
            },
        }
    }

    // ---- THF ----

    fn thf(&mut self, ast: &Ast, ctx: &mut Ctx) -> Result<Term, ParseError> {
        match ast {
            Ast::Var(v, pos) => {
                lookup_var(ctx, v).ok_or_else(|| type_err(ctx.formula, *pos, format!("unbound variable `{v}`")))
            }
            Ast::Fun(name, args, pos) => {
                if !args.is_empty() {
                    return Err(type_err(ctx.formula, *pos, "FOF-style application in THF".into()));
                }
                self.thf_symbol(name, ctx, *pos)
            }
            Ast::Not(a) => {
                let t = self.thf(a, ctx)?;
                expect_o(&t, ctx, ast_pos(a))?;
                Ok(Term::not(t))
            }
            Ast::Bin(op, a, b, pos) => {
                let l = self.thf(a, ctx)?;
                let r = self.thf(b, ctx)?;
                binop(*op, l, r, ctx, *pos)
            }
            Ast::Quant(q, vars, body, pos) => {
                let n = vars.len();
                let mut tys = Vec::with_capacity(n);
                for (v, t) in vars {
                    let ty = match t {
                        Some(t) => self.ty(t, ctx.formula, *pos)?,
                        None => Type::Iota,
                    };
                    ctx.vars.push((v.clone(), ty.clone()));
                    tys.push(ty);
                }
                let b = self.thf(body, ctx);
                ctx.vars.truncate(ctx.vars.len() - n);
                let mut t = b?;
                if *q != Quant::Lambda {
                    expect_o(&t, ctx, *pos)?;
                }
                for ty in tys.into_iter().rev() {
                    t = Term::abs(ty, t);
                    t = match q {
                        Quant::Lambda => t,
                        Quant::Forall => Term::forall_pred(t),
                        Quant::Exists => Term::exists_pred(t),
                    };
                }
                Ok(t)
            }
            Ast::App(..) | Ast::Connective(..) => {
                // Flatten the spine so polymorphic connectives can be typed
                // from their first argument.
                let mut spine = Vec::new();
                let mut cur = ast;
                while let Ast::App(f, a, _) = cur {
                    spine.push(a.as_ref());
                    cur = f;
                }
                spine.reverse();
                let args: Vec<Term> = spine.iter().map(|a| self.thf(a, ctx)).collect::<Result<_, _>>()?;
                let head = match cur {
                    Ast::Connective(c, pos) => connective(*c, args.first(), ctx, *pos)?,
                    other => self.thf(other, ctx)?,
                };
                let mut t = head;
                for (a, ast_a) in args.into_iter().zip(spine) {
                    match t.ty() {
                        Type::Fun(d, _) if *d == a.ty() => t = Term::app(t, a),
                        fty => {
                            return Err(type_err(
                                ctx.formula,
                                ast_pos(ast_a),
                                format!("cannot apply `{t}` of type {fty} to `{a}` of type {}", a.ty()),
                            ))
                        }
                    }
                }
                Ok(t)
            }
        }
    }

    fn thf_symbol(&mut self, name: &str, ctx: &Ctx, pos: Pos) -> Result<Term, ParseError> {
        match name {
            "$true" => return Ok(Term::top()),
            "$false" => return Ok(Term::bot()),
            _ => {}
        }
        if is_reserved_name(name) {
            return Err(type_err(ctx.formula, pos, format!("`{name}` uses a reserved name")));
        }
        match self.problem.signature.get(name) {
            Some(t) => Ok(Term::constant(name, t.clone())),
            None => Err(type_err(ctx.formula, pos, format!("undeclared constant `{name}`"))),
        }
    }

    // ---- FOF / CNF ----

    fn fo_formula(&mut self, ast: &Ast, ctx: &mut Ctx) -> Result<Term, ParseError> {
        match ast {
            Ast::Fun(name, args, pos) => {
                match name.as_str() {
                    "$true" if args.is_empty() => return Ok(Term::top()),
                    "$false" if args.is_empty() => return Ok(Term::bot()),
                    _ => {}
                }
                let ts: Vec<Term> = args.iter().map(|a| self.fo_term(a, ctx)).collect::<Result<_, _>>()?;
                let ty = Type::curried(ts.iter().map(|_| Type::Iota).collect::<Vec<_>>(), Type::O);
                let c = self.fo_symbol(name, ty, ctx, *pos)?;
                Ok(Term::apps(c, ts))
            }
            Ast::Not(a) => Ok(Term::not(self.fo_formula(a, ctx)?)),
            Ast::Bin(op @ (BinOp::Eq | BinOp::Neq), a, b, pos) => {
                let l = self.fo_term(a, ctx)?;
                let r = self.fo_term(b, ctx)?;
                binop(*op, l, r, ctx, *pos)
            }
            Ast::Bin(op, a, b, pos) => {
                let l = self.fo_formula(a, ctx)?;
                let r = self.fo_formula(b, ctx)?;
                binop(*op, l, r, ctx, *pos)
            }
            Ast::Quant(Quant::Lambda, _, _, pos) => Err(type_err(ctx.formula, *pos, "λ in first-order input".into())),
            Ast::Quant(q, vars, body, pos) => {
                for (v, t) in vars {
                    if t.is_some() {
                        return Err(type_err(
                            ctx.formula,
                            *pos,
                            "typed variable in first-order input".into(),
                        ));
                    }
                    ctx.vars.push((v.clone(), Type::Iota));
                }
                let b = self.fo_formula(body, ctx);
                ctx.vars.truncate(ctx.vars.len() - vars.len());
                let mut t = b?;
                for _ in vars {
                    t = Term::abs(Type::Iota, t);
                    t = if *q == Quant::Forall {
                        Term::forall_pred(t)
                    } else {
                        Term::exists_pred(t)
                    };
                }
                Ok(t)
            }
            Ast::Var(_, pos) => Err(type_err(ctx.formula, *pos, "variable used as a formula".into())),
            Ast::App(_, _, pos) | Ast::Connective(_, pos) => Err(type_err(
                ctx.formula,
                *pos,
                "higher-order syntax in first-order input".into(),
            )),
        }
    }

    fn fo_term(&mut self, ast: &Ast, ctx: &mut Ctx) -> Result<Term, ParseError> {
        match ast {
            Ast::Var(v, pos) => {
                lookup_var(ctx, v).ok_or_else(|| type_err(ctx.formula, *pos, format!("unbound variable `{v}`")))
            }
            Ast::Fun(name, args, pos) => {
                let ts: Vec<Term> = args.iter().map(|a| self.fo_term(a, ctx)).collect::<Result<_, _>>()?;
                let ty = Type::curried(ts.iter().map(|_| Type::Iota).collect::<Vec<_>>(), Type::Iota);
                let c = self.fo_symbol(name, ty, ctx, *pos)?;
                Ok(Term::apps(c, ts))
            }
            other => Err(type_err(ctx.formula, ast_pos(other), "formula used as a term".into())),
        }
    }

    fn fo_symbol(&mut self, name: &str, ty: Type, ctx: &Ctx, pos: Pos) -> Result<Term, ParseError> {
        if name.starts_with('$') {
            return Err(type_err(
                ctx.formula,
                pos,
                format!("unsupported defined symbol `{name}`"),
            ));
        }
        // first-order input may be our own translation output, which
        // carries Skolem and lifted symbols
        self.declare_unchecked(name, ty.clone(), ctx.formula, pos)?;
        Ok(Term::constant(name, ty))
    }
}

fn lookup_var(ctx: &Ctx, v: &str) -> Option<Term> {
    let pos = ctx.vars.iter().rposition(|(n, _)| n == v)?;
    let idx = (ctx.vars.len() - 1 - pos) as u32;
    Some(Term::bound(idx, ctx.vars[pos].1.clone()))
}

fn collect_unbound(ast: &Ast, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match ast {
        Ast::Var(v, _) => {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        }
        Ast::Fun(_, args, _) => args.iter().for_each(|a| collect_unbound(a, bound, out)),
        Ast::App(f, a, _) | Ast::Bin(_, f, a, _) => {
            collect_unbound(f, bound, out);
            collect_unbound(a, bound, out);
        }
        Ast::Not(a) => collect_unbound(a, bound, out),
        Ast::Quant(_, vars, body, _) => {
            let n = vars.len();
            bound.extend(vars.iter().map(|(v, _)| v.clone()));
            collect_unbound(body, bound, out);
            bound.truncate(bound.len() - n);
        }
        Ast::Connective(..) => {}
    }
}

fn ast_pos(a: &Ast) -> Pos {
    match a {
        Ast::Var(_, p)
        | Ast::Fun(_, _, p)
        | Ast::App(_, _, p)
        | Ast::Bin(_, _, _, p)
        | Ast::Quant(_, _, _, p)
        | Ast::Connective(_, p) => *p,
        Ast::Not(a) => ast_pos(a),
    }
}

fn type_err(formula: &str, pos: Pos, msg: String) -> ParseError {
    ParseError::Type {
        formula: formula.to_string(),
        line: pos.line,
        col: pos.col,
        msg,
    }
}

fn expect_o(t: &Term, ctx: &Ctx, pos: Pos) -> Result<(), ParseError> {
    if t.ty() == Type::O {
        Ok(())
    } else {
        Err(type_err(
            ctx.formula,
            pos,
            format!("`{t}` has type {}, expected $o", t.ty()),
        ))
    }
}

fn binop(op: BinOp, l: Term, r: Term, ctx: &Ctx, pos: Pos) -> Result<Term, ParseError> {
    if matches!(op, BinOp::Eq | BinOp::Neq) {
        if l.ty() != r.ty() {
            return Err(type_err(
                ctx.formula,
                pos,
                format!("equation between types {} and {}", l.ty(), r.ty()),
            ));
        }
        let e = Term::eq(l, r);
        return Ok(if op == BinOp::Neq { Term::not(e) } else { e });
    }
    expect_o(&l, ctx, pos)?;
    expect_o(&r, ctx, pos)?;
    Ok(match op {
        BinOp::And => Term::and(l, r),
        BinOp::Or => Term::or(l, r),
        BinOp::Implies => Term::imp(l, r),
        BinOp::RevImplies => Term::imp(r, l),
        BinOp::Iff => Term::iff(l, r),
        BinOp::Xor => Term::not(Term::iff(l, r)),
        BinOp::Nor => Term::not(Term::or(l, r)),
        BinOp::Nand => Term::not(Term::and(l, r)),
        BinOp::Eq | BinOp::Neq => unreachable!(),
    })
}

/// A connective used as a term. Polymorphic ones are typed from the first
/// argument they are applied to.
fn connective(c: ConnTerm, first: Option<&Term>, ctx: &Ctx, pos: Pos) -> Result<Term, ParseError> {
    let need = |what: &str| {
        type_err(
            ctx.formula,
            pos,
            format!("cannot infer the type of {what} without an argument"),
        )
    };
    Ok(match c {
        ConnTerm::Not => Term::not_const(),
        ConnTerm::Bin(BinOp::And) => Term::binop_const(logic::AND),
        ConnTerm::Bin(BinOp::Or) => Term::binop_const(logic::OR),
        ConnTerm::Bin(BinOp::Implies) => Term::binop_const(logic::IMP),
        ConnTerm::Bin(BinOp::Iff) => Term::binop_const(logic::IFF),
        ConnTerm::Bin(op @ (BinOp::Eq | BinOp::Neq)) => {
            let ty = first.ok_or_else(|| need("(=)"))?.ty();
            if op == BinOp::Eq {
                Term::eq_const(ty)
            } else {
                let x = Term::bound(1, ty.clone());
                let y = Term::bound(0, ty.clone());
                Term::abs(ty.clone(), Term::abs(ty, Term::not(Term::eq(x, y))))
            }
        }
        ConnTerm::Bin(op) => {
            // Derived binary connectives become λ-terms over $o.
            let x = Term::bound(1, Type::O);
            let y = Term::bound(0, Type::O);
            let body = binop(op, x, y, ctx, pos)?;
            Term::abs(Type::O, Term::abs(Type::O, body))
        }
        ConnTerm::Pi | ConnTerm::Sigma => {
            let pty = first.ok_or_else(|| need("a quantifier constant"))?.ty();
            let elem = match &pty {
                Type::Fun(d, c) if **c == Type::O => d.as_ref().clone(),
                other => {
                    return Err(type_err(
                        ctx.formula,
                        pos,
                        format!("quantifier applied to type {other}"),
                    ))
                }
            };
            let name = if c == ConnTerm::Pi {
                logic::FORALL
            } else {
                logic::EXISTS
            };
            Term::quant_const(name, elem)
        }
    })
}

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{AnnotatedFormula, Language, Problem};
use crate::term::print::{atom_name, type_str};
use crate::term::{logic, Name, Node, Term};

/// Prints one annotated formula in the syntax of its source language.
pub fn print_tptp(f: &AnnotatedFormula) -> String {
    let body = match f.language {
        Language::Thf => f.formula.to_string(),
        Language::Fof => fof_formula_string(&f.formula),
        Language::Cnf => cnf_string(&f.formula),
    };
    format!(
        "{}({}, {}, {}).",
        f.language.keyword(),
        atom_name(&f.name),
        f.role,
        body
    )
}

/// Prints a whole problem. THF type declarations are emitted whenever some
/// formula is in THF.
pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    if p.formulas.iter().any(|f| f.language == Language::Thf) {
        for b in &p.base_types {
            let _ = writeln!(out, "thf({}_type, type, {}: $tType).", b, atom_name(b));
        }
        for (n, ty) in &p.signature {
            let _ = writeln!(
                out,
                "thf({}, type, {}: {}).",
                atom_name(&format!("{n}_decl")),
                atom_name(n),
                type_str(ty)
            );
        }
    }
    for f in &p.formulas {
        out.push_str(&print_tptp(f));
        out.push('\n');
    }
    out
}

/// FOF rendering of a first-order-shaped term.
pub fn fof_formula_string(t: &Term) -> String {
    let mut p = FoPrinter {
        used: t.free_vars(),
        binders: Vec::new(),
        counter: 0,
    };
    let mut s = String::new();
    p.formula(t, false, &mut s);
    s
}

fn cnf_string(t: &Term) -> String {
    // Strip the universal closure; CNF variables are implicitly universal.
    let mut p = FoPrinter {
        used: t.free_vars(),
        binders: Vec::new(),
        counter: 0,
    };
    let mut cur = t;
    while let Some(args) = cur.logical_args(logic::FORALL, 1) {
        match args[0].node() {
            Node::Abs(_, body) => {
                let n = p.fresh();
                p.binders.push(n);
                cur = body;
            }
            _ => break,
        }
    }
    let mut s = String::new();
    p.formula(cur, false, &mut s);
    s
}

struct FoPrinter {
    used: BTreeSet<Name>,
    binders: Vec<String>,
    counter: usize,
}

impl FoPrinter {
    fn fresh(&mut self) -> String {
        loop {
            let n = format!("Z{}", self.counter);
            self.counter += 1;
            if !self.used.contains(n.as_str()) {
                return n;
            }
        }
    }

    fn formula(&mut self, t: &Term, nested: bool, out: &mut String) {
        let (head, args) = t.spine();
        let open = |out: &mut String| {
            if nested {
                out.push('(')
            }
        };
        let close = |out: &mut String| {
            if nested {
                out.push(')')
            }
        };
        if let Node::Const(n, _) = head.node() {
            match (n.as_ref(), args.len()) {
                (logic::TRUE, 0) => return out.push_str("$true"),
                (logic::FALSE, 0) => return out.push_str("$false"),
                (logic::NOT, 1) => {
                    open(out);
                    out.push_str("~ ");
                    self.formula(args[0], true, out);
                    close(out);
                    return;
                }
                (logic::AND | logic::OR | logic::IMP | logic::IFF, 2) => {
                    let op = match n.as_ref() {
                        logic::AND => " & ",
                        logic::OR => " | ",
                        logic::IMP => " => ",
                        _ => " <=> ",
                    };
                    open(out);
                    self.formula(args[0], true, out);
                    out.push_str(op);
                    self.formula(args[1], true, out);
                    close(out);
                    return;
                }
                (logic::EQ, 2) => {
                    open(out);
                    self.term(args[0], out);
                    out.push_str(" = ");
                    self.term(args[1], out);
                    close(out);
                    return;
                }
                (logic::FORALL | logic::EXISTS, 1) => {
                    if let Node::Abs(_, body) = args[0].node() {
                        let name = self.fresh();
                        open(out);
                        out.push_str(if n.as_ref() == logic::FORALL { "![" } else { "?[" });
                        out.push_str(&name);
                        out.push_str("]: ");
                        self.binders.push(name);
                        self.formula(body, true, out);
                        self.binders.pop();
                        close(out);
                        return;
                    }
                }
                _ => {}
            }
        }
        self.term(t, out);
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        let (head, args) = t.spine();
        match head.node() {
            Node::Const(n, _) => out.push_str(&atom_name(n)),
            Node::Free(n, _) => out.push_str(n),
            Node::Bound(i, _) => {
                let k = self.binders.len() - 1 - *i as usize;
                out.push_str(&self.binders[k]);
            }
            // Not first-order; fall back to THF rendering of the subterm.
            _ => out.push_str(&t.to_string()),
        }
        if !args.is_empty() {
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                self.term(a, out);
            }
            out.push(')');
        }
    }
}

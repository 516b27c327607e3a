//! TPTP THF rendering of terms. Binder names are regenerated on the fly and
//! chosen so they never clash with free variables of the printed term.

use std::collections::BTreeSet;
use std::fmt;

use super::{logic, Name, Node, Term, Type};

/// Renders a term in THF syntax.
pub struct TermDisplay<'a> {
    term: &'a Term,
}

impl<'a> TermDisplay<'a> {
    pub fn new(term: &'a Term) -> Self {
        TermDisplay { term }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used: BTreeSet<Name> = self.term.free_vars();
        let mut p = Printer {
            used,
            binders: Vec::new(),
            counter: 0,
        };
        let mut s = String::new();
        p.term(self.term, false, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        TermDisplay::new(self).fmt(f)
    }
}

/// Quotes a constant name unless it is a valid TPTP lower word.
pub fn atom_name(name: &str) -> String {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some('$') => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => false,
    };
    if ok {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Type rendering suitable inside a binder or declaration.
pub fn type_str(ty: &Type) -> String {
    if ty.is_fun() {
        format!("({ty})")
    } else {
        ty.to_string()
    }
}

struct Printer {
    used: BTreeSet<Name>,
    binders: Vec<String>,
    counter: usize,
}

impl Printer {
    fn fresh(&mut self) -> String {
        loop {
            let n = format!("Z{}", self.counter);
            self.counter += 1;
            if !self.used.contains(n.as_str()) {
                return n;
            }
        }
    }

    fn binder(&mut self, kind: &str, ty: &Type, body: &Term, out: &mut String) {
        let name = self.fresh();
        out.push_str(kind);
        out.push('[');
        out.push_str(&name);
        out.push(':');
        out.push_str(&type_str(ty));
        out.push_str("]: ");
        self.binders.push(name);
        self.term(body, true, out);
        self.binders.pop();
    }

    fn term(&mut self, t: &Term, nested: bool, out: &mut String) {
        match t.node() {
            Node::Free(n, _) => out.push_str(n),
            Node::Bound(i, _) => {
                let idx = self.binders.len().checked_sub(*i as usize + 1);
                match idx {
                    Some(k) => out.push_str(&self.binders[k]),
                    None => out.push_str(&format!("#{i}")),
                }
            }
            Node::Const(n, ty) => self.bare_const(n, ty, nested, out),
            Node::Abs(ty, body) => {
                if nested {
                    out.push('(');
                }
                self.binder("^", ty, body, out);
                if nested {
                    out.push(')');
                }
            }
            Node::App(..) => self.app(t, nested, out),
        }
    }

    fn app(&mut self, t: &Term, nested: bool, out: &mut String) {
        let (head, args) = t.spine();
        if let Node::Const(n, _) = head.node() {
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
            match (n.as_ref(), args.len()) {
                (logic::NOT, 1) => {
                    open(out);
                    out.push_str("~ ");
                    self.term(args[0], true, out);
                    close(out);
                    return;
                }
                (logic::AND | logic::OR | logic::IMP | logic::IFF | logic::EQ, 2) => {
                    let op = match n.as_ref() {
                        logic::AND => " & ",
                        logic::OR => " | ",
                        logic::IMP => " => ",
                        logic::IFF => " <=> ",
                        _ => " = ",
                    };
                    open(out);
                    self.term(args[0], true, out);
                    out.push_str(op);
                    self.term(args[1], true, out);
                    close(out);
                    return;
                }
                (logic::FORALL | logic::EXISTS, 1) => {
                    if let Node::Abs(ty, body) = args[0].node() {
                        let kind = if n.as_ref() == logic::FORALL { "!" } else { "?" };
                        open(out);
                        self.binder(kind, ty, body, out);
                        close(out);
                        return;
                    }
                }
                _ => {}
            }
        }
        out.push('(');
        match head.node() {
            // The first argument fixes the type of a polymorphic constant.
            Node::Const(n, _) => out.push_str(&const_str(n)),
            _ => self.term(head, true, out),
        }
        for a in args {
            out.push_str(" @ ");
            self.term(a, true, out);
        }
        out.push(')');
    }
}

impl Printer {
    /// Unapplied `=` and quantifier constants cannot be typed on re-parse,
    /// so they are printed η-expanded.
    fn bare_const(&mut self, n: &Name, ty: &Type, nested: bool, out: &mut String) {
        let (args, _) = ty.split();
        let expand = match n.as_ref() {
            logic::EQ => 2,
            logic::FORALL | logic::EXISTS => 1,
            _ => 0,
        };
        if expand == 0 {
            out.push_str(&const_str(n));
            return;
        }
        let names: Vec<String> = (0..expand).map(|_| self.fresh()).collect();
        if nested {
            out.push('(');
        }
        out.push_str("^[");
        for (i, name) in names.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(name);
            out.push(':');
            out.push_str(&type_str(&args[i]));
        }
        out.push_str("]: (");
        out.push_str(&const_str(n));
        for name in &names {
            out.push_str(" @ ");
            out.push_str(name);
        }
        out.push(')');
        if nested {
            out.push(')');
        }
    }
}

fn const_str(n: &str) -> String {
    match n {
        logic::NOT => "(~)".into(),
        logic::AND => "(&)".into(),
        logic::OR => "(|)".into(),
        logic::IMP => "(=>)".into(),
        logic::IFF => "(<=>)".into(),
        logic::EQ => "(=)".into(),
        logic::FORALL => "!!".into(),
        logic::EXISTS => "??".into(),
        logic::TRUE | logic::FALSE => n.into(),
        _ => atom_name(n),
    }
}

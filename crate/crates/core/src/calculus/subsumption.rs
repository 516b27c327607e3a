use std::collections::BTreeMap;

use crate::clause::{Clause, Literal};
use crate::term::{Name, Node, Term};

/// Syntactic matching: extends `bind` so that `pattern` with its free
/// variables replaced equals `target`. Variables of `target` are treated as
/// constants. Variables only bind to subterms without loose bound variables.
pub fn match_terms(pattern: &Term, target: &Term, bind: &mut BTreeMap<Name, Term>) -> bool {
    match (pattern.node(), target.node()) {
        (Node::Free(n, ty), _) => {
            if target.has_loose_bvars() || *ty != target.ty() {
                return false;
            }
            match bind.get(n) {
                Some(t) => t == target,
                None => {
                    bind.insert(n.clone(), target.clone());
                    true
                }
            }
        }
        (Node::App(f1, a1), Node::App(f2, a2)) => {
            let saved = bind.clone();
            if match_terms(f1, f2, bind) && match_terms(a1, a2, bind) {
                true
            } else {
                *bind = saved;
                false
            }
        }
        (Node::Abs(t1, b1), Node::Abs(t2, b2)) => t1 == t2 && match_terms(b1, b2, bind),
        _ => pattern == target,
    }
}

/// Constraints count as negative equations.
fn all_literals(c: &Clause) -> Vec<Literal> {
    let mut v = c.literals.clone();
    v.extend(
        c.constraints
            .iter()
            .map(|(s, t)| Literal::neg(Term::eq(s.clone(), t.clone()))),
    );
    v
}

fn match_literal(p: &Literal, t: &Literal, bind: &mut BTreeMap<Name, Term>) -> bool {
    if p.positive != t.positive {
        return false;
    }
    let saved = bind.clone();
    if match_terms(&p.atom, &t.atom, bind) {
        return true;
    }
    *bind = saved.clone();
    if let (Some((l1, r1)), Some((l2, r2))) = (p.as_eq(), t.as_eq()) {
        if match_terms(l1, r2, bind) && match_terms(r1, l2, bind) {
            return true;
        }
    }
    *bind = saved;
    false
}

fn search(ps: &[Literal], ts: &[Literal], used: &mut Vec<bool>, bind: &mut BTreeMap<Name, Term>) -> bool {
    let Some((p, rest)) = ps.split_first() else {
        return true;
    };
    for (k, t) in ts.iter().enumerate() {
        if used[k] {
            continue;
        }
        let saved = bind.clone();
        if match_literal(p, t, bind) {
            used[k] = true;
            if search(rest, ts, used, bind) {
                return true;
            }
            used[k] = false;
        }
        *bind = saved;
    }
    false
}

/// Does some substitution map the literals of `c1` injectively onto
/// literals of `c2` with matching polarities?
pub fn subsumes(c1: &Clause, c2: &Clause) -> bool {
    let ps = all_literals(c1);
    let ts = all_literals(c2);
    if ps.len() > ts.len() {
        return false;
    }
    let mut used = vec![false; ts.len()];
    search(&ps, &ts, &mut used, &mut BTreeMap::new())
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::calculus::is_choice_axiom_shape;
use crate::clausify::{clausify, ExtOptions, Namer};
use crate::term::{logic, Node, Term, Type};
use crate::tptp::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fragment {
    Propositional,
    FirstOrderLike,
    HigherOrder,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Propositional => "propositional",
            Fragment::FirstOrderLike => "first-order-like",
            Fragment::HigherOrder => "higher-order",
        })
    }
}

/// Cheap syntactic facts about a problem, computed once before search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFeatures {
    pub formula_count: usize,
    pub total_size: usize,
    pub max_order: usize,
    pub contains_ac_instance: bool,
    pub contains_choice_terms: bool,
    /// At least half of the formulas mention equality.
    pub equality_heavy: bool,
    /// Some formula uses primitive equality at all.
    pub has_equality: bool,
    pub has_conjecture: bool,
    pub fragment: Fragment,
}

pub fn analyze_problem(p: &Problem) -> ProblemFeatures {
    let fs: Vec<&Term> = p.formulas.iter().map(|f| &f.formula).collect();
    let mut max_order = 0;
    let mut choice_terms = false;
    for f in &fs {
        f.visit(&mut |t, _| match t.node() {
            Node::Const(n, ty) | Node::Free(n, ty) => {
                if !logic::is_logical(n) {
                    max_order = max_order.max(ty.order());
                }
                if ty.choice_elem().is_some() && !logic::is_logical(n) {
                    choice_terms = true;
                }
            }
            Node::Abs(ty, _) => max_order = max_order.max(ty.order() + 1),
            _ => {}
        });
    }
    let with_eq = fs.iter().filter(|f| mentions_equality(f)).count();
    // the choice axiom shape is recognized on clause level
    let clauses = clausify(p, ExtOptions::default(), &mut Namer::new());
    let ac = clauses.iter().any(|c| is_choice_axiom_shape(c).is_some());
    ProblemFeatures {
        formula_count: fs.len(),
        total_size: fs.iter().map(|f| f.size()).sum(),
        max_order,
        contains_ac_instance: ac,
        contains_choice_terms: choice_terms,
        equality_heavy: !fs.is_empty() && 2 * with_eq >= fs.len(),
        has_equality: with_eq > 0,
        has_conjecture: p.has_conjecture(),
        fragment: fragment(&fs),
    }
}

fn mentions_equality(t: &Term) -> bool {
    t.any_subterm(&|s| s.is_const_named(logic::EQ))
}

/// First-order-like: binders only quantify over base types other than
/// `$o` and no formula occurs below a non-logical symbol. λ-abstractions
/// rule it out. Propositional additionally has no binders and only constants
/// of type `$o`.
fn fragment(fs: &[&Term]) -> Fragment {
    let mut fo = true;
    let mut prop = true;
    for f in fs {
        formula_shape(f, &mut fo, &mut prop);
    }
    if prop && fo {
        Fragment::Propositional
    } else if fo {
        Fragment::FirstOrderLike
    } else {
        Fragment::HigherOrder
    }
}

fn formula_shape(f: &Term, fo: &mut bool, prop: &mut bool) {
    let (h, args) = f.spine();
    match h.node() {
        Node::Const(n, ty) if logic::is_logical(n) => {
            if n.as_ref() == logic::FORALL || n.as_ref() == logic::EXISTS {
                *prop = false;
                let dom = ty.domain().and_then(Type::domain);
                if !dom.is_some_and(|d| d.is_base() && *d != Type::O) || args.len() != 1 {
                    *fo = false;
                    return;
                }
                match args[0].node() {
                    Node::Abs(_, body) => formula_shape(body, fo, prop),
                    _ => *fo = false,
                }
            } else if n.as_ref() == logic::EQ {
                *prop = false;
                let elem = ty.domain();
                if args.len() != 2 || !elem.is_some_and(|d| d.is_base()) {
                    *fo = false;
                    return;
                }
                if elem == Some(&Type::O) {
                    formula_shape(args[0], fo, prop);
                    formula_shape(args[1], fo, prop);
                } else {
                    args.iter().for_each(|a| term_shape(a, fo));
                }
            } else if args.len() == connective_arity(n) {
                args.iter().for_each(|a| formula_shape(a, fo, prop));
            } else {
                *fo = false;
            }
        }
        Node::Const(_, ty) => {
            if !args.is_empty() || *ty != Type::O {
                *prop = false;
            }
            if ty.arity() != args.len() || !first_order_type(ty) {
                *fo = false;
            }
            args.iter().for_each(|a| term_shape(a, fo));
        }
        Node::Bound(..) if args.is_empty() && h.ty() == Type::O => {
            *fo = false;
        }
        _ => *fo = false,
    }
}

fn term_shape(t: &Term, fo: &mut bool) {
    let (h, args) = t.spine();
    match h.node() {
        Node::Const(n, ty) if !logic::is_logical(n) => {
            if ty.arity() != args.len() || !first_order_type(ty) || *ty.target() == Type::O {
                *fo = false;
            }
            args.iter().for_each(|a| term_shape(a, fo));
        }
        Node::Bound(_, ty) | Node::Free(_, ty) if args.is_empty() && ty.is_base() && *ty != Type::O => {}
        _ => *fo = false,
    }
}

fn connective_arity(n: &str) -> usize {
    match n {
        logic::TRUE | logic::FALSE => 0,
        logic::NOT => 1,
        _ => 2,
    }
}

/// Arguments are individuals of base types other than `$o`.
fn first_order_type(ty: &Type) -> bool {
    let (doms, _) = ty.split();
    doms.iter().all(|d| d.is_base() && *d != Type::O)
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;
    use crate::tptp::parse_problem;

    fn features(text: &str) -> ProblemFeatures {
        analyze_problem(&parse_problem(text, Path::new(".")).unwrap())
    }

    #[test]
    fn choice_axiom_is_an_ac_instance() {
        let f = features(
            "thf(eps, type, eps: ($i > $o) > $i).\n\
             thf(ac, axiom, ![P: $i > $o]: ((?[X: $i]: (P @ X)) => (P @ (eps @ P)))).",
        );
        assert!(f.contains_ac_instance);
        assert!(f.contains_choice_terms);
        assert_eq!(f.fragment, Fragment::HigherOrder);
    }

    #[test]
    fn propositional() {
        let f = features("thf(p, type, p: $o).\nthf(q, type, q: $o).\nthf(c, conjecture, (p & q) => p).");
        assert_eq!(f.fragment, Fragment::Propositional);
        assert!(f.has_conjecture);
        assert!(!f.contains_ac_instance);
    }

    #[test]
    fn first_order_like() {
        let f = features("fof(a, axiom, ![X]: (p(X) => q(f(X)))).\nfof(b, axiom, a = b).");
        assert_eq!(f.fragment, Fragment::FirstOrderLike);
        assert!(f.equality_heavy);
        assert_eq!(f.max_order, 1);
    }

    #[test]
    fn lambdas_and_flex_heads_are_higher_order() {
        let f = features("thf(q, type, q: ($i > $o) > $o).\nthf(ax, axiom, q @ (^[X: $i]: $true)).");
        assert_eq!(f.fragment, Fragment::HigherOrder);
        let f = features("thf(a, type, a: $i).\nthf(ax, axiom, ![P: $i > $o]: (P @ a)).");
        assert_eq!(f.fragment, Fragment::HigherOrder);
    }
}

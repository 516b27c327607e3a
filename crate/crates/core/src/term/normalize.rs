use super::{Node, Term};

/// βη-normal form by leftmost-outermost reduction; η-contraction is applied
/// bottom-up to every abstraction after its body is normal.
pub fn beta_normalize(t: &Term) -> Term {
    match t.node() {
        Node::Abs(ty, b) => eta_contract(Term::abs(ty.clone(), beta_normalize(b))),
        Node::App(..) => {
            let (head, args) = t.spine();
            if let Node::Abs(_, body) = head.node() {
                // Contract the outermost redex first.
                let reduced = body.instantiate(args[0]);
                let rest = args[1..].iter().map(|a| (*a).clone());
                beta_normalize(&Term::apps(reduced, rest))
            } else {
                let head = head.clone();
                let args: Vec<Term> = args.into_iter().map(beta_normalize).collect();
                Term::apps(head, args)
            }
        }
        _ => t.clone(),
    }
}

/// βη-normal form by applicative-order reduction (arguments first). Exists
/// as an independent route to the same normal form.
pub fn beta_normalize_applicative(t: &Term) -> Term {
    match t.node() {
        Node::Abs(ty, b) => eta_contract(Term::abs(ty.clone(), beta_normalize_applicative(b))),
        Node::App(f, a) => {
            let f = beta_normalize_applicative(f);
            let a = beta_normalize_applicative(a);
            match f.node() {
                Node::Abs(_, body) => beta_normalize_applicative(&body.instantiate(&a)),
                _ => Term::app(f, a),
            }
        }
        _ => t.clone(),
    }
}

/// `λx. f x` → `f` when `x` is not free in `f`. Expects a normal body.
fn eta_contract(t: Term) -> Term {
    if let Node::Abs(_, body) = t.node() {
        if let Node::App(f, a) = body.node() {
            if matches!(a.node(), Node::Bound(0, _)) && !f.has_loose_bvar(0) {
                return f.shift(-1, 0);
            }
        }
    }
    t
}

use super::{rules, RuleCtx, RuleResult};
use crate::clause::{Clause, Literal, Origin};
use crate::term::{logic, Node, Substitution, Term, Type, Var};
use crate::unify::partial_binding;

/// How much of the connective catalogue primitive substitution guesses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum PrimSubstMode {
    /// `-ps 0`: disabled.
    Off,
    /// `-ps 1`: imitate the propositional connectives and equality.
    #[default]
    Connectives,
    /// `-ps 2`: additionally universal and existential quantification.
    Quantifiers,
}

impl PrimSubstMode {
    pub fn from_level(n: u8) -> Option<PrimSubstMode> {
        match n {
            0 => Some(PrimSubstMode::Off),
            1 => Some(PrimSubstMode::Connectives),
            2 => Some(PrimSubstMode::Quantifiers),
            _ => None,
        }
    }

    pub fn level(self) -> u8 {
        match self {
            PrimSubstMode::Off => 0,
            PrimSubstMode::Connectives => 1,
            PrimSubstMode::Quantifiers => 2,
        }
    }
}

/// Instantiates the head variable of each flex literal with general
/// bindings for logical constants. Equality and quantifier imitations are
/// generated at each of `base_types`.
pub fn prim_subst(c: &Clause, mode: PrimSubstMode, base_types: &[Type], ctx: &mut RuleCtx) -> RuleResult {
    let mut r = RuleResult::default();
    if mode == PrimSubstMode::Off {
        return r;
    }
    let mut heads: Vec<Var> = Vec::new();
    for l in &c.literals {
        if let Node::Free(n, ty) = l.atom.head().node() {
            let v = Var::new(n.clone(), ty.clone());
            if !heads.contains(&v) {
                heads.push(v);
            }
        }
    }
    for p in heads {
        for (label, binding) in bindings(&p.ty, mode, base_types, ctx) {
            let s = Substitution::single(&p, binding).expect("well-typed binding");
            let lits: Vec<Literal> = c
                .literals
                .iter()
                .map(|l| Literal::new(s.apply(&l.atom), l.positive))
                .collect();
            let cons = c.constraints.iter().map(|(a, b)| (s.apply(a), s.apply(b))).collect();
            let origin = Origin::new(rules::PRIM_SUBST, &[c]).with_note(format!("{label}: {s}"));
            r.new_clauses.extend(ctx.conclude(lits, cons, origin));
        }
    }
    r
}

fn bindings(ty: &Type, mode: PrimSubstMode, base_types: &[Type], ctx: &mut RuleCtx) -> Vec<(String, Term)> {
    let (args, target) = ty.split();
    if target != Type::O {
        return Vec::new();
    }
    let mut heads: Vec<(String, Term)> = vec![
        ("not".into(), Term::not_const()),
        ("and".into(), Term::binop_const(logic::AND)),
        ("or".into(), Term::binop_const(logic::OR)),
    ];
    for b in base_types {
        heads.push((format!("eq {b}"), Term::eq_const(b.clone())));
    }
    if mode == PrimSubstMode::Quantifiers {
        for b in base_types {
            heads.push((format!("forall {b}"), Term::quant_const(logic::FORALL, b.clone())));
            heads.push((format!("exists {b}"), Term::quant_const(logic::EXISTS, b.clone())));
        }
    }
    heads
        .into_iter()
        .map(|(label, h)| (label, partial_binding(h, &args, ctx.namer)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use crate::clausify::Namer;
    use crate::unify::UnifyOptions;

    fn run(c: &Clause, mode: PrimSubstMode) -> Vec<Clause> {
        let mut namer = Namer::new();
        let mut ctx = RuleCtx::new(UnifyOptions::default(), &mut namer);
        prim_subst(c, mode, &[Type::Iota], &mut ctx).new_clauses
    }

    #[test]
    fn disabled_mode_is_silent() {
        let cl = clause(vec![(var("P", Type::O), false)]);
        assert!(run(&cl, PrimSubstMode::Off).is_empty());
    }

    #[test]
    fn propositional_variable_catalogue() {
        let cl = clause(vec![(var("P", Type::O), false)]);
        let out = run(&cl, PrimSubstMode::Connectives);
        let notes: Vec<&str> = out.iter().map(|c| c.origin.note.split(':').next().unwrap()).collect();
        // ¬H gives [H]^tt; H1∧H2 gives one clause; H1∨H2 splits in two
        assert!(notes.contains(&"not"));
        assert!(notes.contains(&"and"));
        assert!(notes.contains(&"or"));
        assert!(notes.contains(&"eq $i"));
        assert!(strs(&out).contains(&"[X0 = X1]^ff".to_string()));
        assert!(strs(&out).contains(&"[X0]^tt".to_string()));
    }

    #[test]
    fn quantifier_imitations_need_full_mode() {
        let cl = clause(vec![(Term::app(var("P", Type::predicate(i())), c("a")), true)]);
        let light = run(&cl, PrimSubstMode::Connectives);
        assert!(light.iter().all(|c| !c.origin.note.starts_with("forall")));
        let full = run(&cl, PrimSubstMode::Quantifiers);
        let q: Vec<String> = full
            .iter()
            .filter(|c| c.origin.note.starts_with("forall"))
            .map(|c| c.to_string())
            .collect();
        // ∀ under positive polarity opens into a fresh variable
        assert_eq!(q, ["[(X0 @ a @ X1)]^tt"]);
    }

    #[test]
    fn rigid_literals_are_ignored() {
        let cl = clause(vec![(Term::app(pred("p"), c("a")), true)]);
        assert!(run(&cl, PrimSubstMode::Quantifiers).is_empty());
    }
}

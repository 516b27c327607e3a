use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use super::*;
use crate::atp::SzsStatus;
use crate::calculus::rules;
use crate::clausify::{clausify, ExtOptions, Namer};
use crate::tptp::parse_problem;

const EPS_AXIOM: &str = "thf(p, type, p: $i > $o).\nthf(eps, type, eps: ($i > $o) > $i).\n\
    thf(ac, axiom, ![P: $i > $o]: ((?[X: $i]: (P @ X)) => (P @ (eps @ P)))).\n";

fn run(text: &str, overrides: Overrides) -> SzsResult {
    let p = parse_problem(text, Path::new(".")).unwrap();
    let cfg = SearchConfig {
        budget: Duration::from_secs(5),
        overrides,
        ..SearchConfig::default()
    };
    prove(&p, &cfg)
}

#[test]
fn complementary_units_refute_in_one_iteration() {
    let p = parse_problem(
        "thf(p, type, p: $o).\nthf(a, axiom, p).\nthf(b, axiom, ~p).",
        Path::new("."),
    )
    .unwrap();
    let mut state = ProverState::from_problem(&p, ExtOptions::default());
    let strat = Strategy::interactive();
    configure(&mut state, &strat);
    let far = Instant::now() + Duration::from_secs(5);
    assert!(matches!(step(&mut state, &strat, far), StepOutcome::Given(_)));
    assert!(matches!(step(&mut state, &strat, far), StepOutcome::Refuted(_)));
    assert_eq!(
        run(
            "thf(p, type, p: $o).\nthf(a, axiom, p).\nthf(b, axiom, ~p).",
            Overrides::default()
        )
        .status,
        SzsStatus::Unsatisfiable
    );
}

#[test]
fn excluded_middle_is_a_theorem() {
    let r = run(
        "thf(p, type, p: $o).\nthf(c, conjecture, p | ~p).",
        Overrides::default(),
    );
    assert_eq!(r.status, SzsStatus::Theorem);
}

#[test]
fn choice_axiom_and_conjecture() {
    let text = format!("{EPS_AXIOM}thf(c, conjecture, (?[X: $i]: (p @ X)) => (p @ (eps @ p))).");
    let r = run(&text, Overrides::default());
    assert_eq!(r.status, SzsStatus::Theorem);
    assert!(r.trace_has(rules::DETECT_CHOICE_FN));
    assert!(
        r.proof_rules().contains(&rules::CHOICE.to_string()),
        "{:?}",
        r.proof_rules()
    );
    let r = run(
        &text,
        Overrides {
            no_choice: true,
            ..Overrides::default()
        },
    );
    assert!(!r.trace_has(rules::DETECT_CHOICE_FN) && !r.trace_has(rules::CHOICE));
}

#[test]
fn universal_conjecture_over_one_instance_is_countersatisfiable() {
    let text = "thf(p, type, p: $i > $o).\nthf(c, type, c: $i).\nthf(a, axiom, p @ c).\n\
                thf(g, conjecture, ![X: $i]: (p @ X)).";
    let r = run(text, Overrides::default());
    assert_eq!(r.status, SzsStatus::CounterSatisfiable);
    // the negated conjecture has a model of size 2
    let p = parse_problem(text, Path::new(".")).unwrap();
    let cs = clausify(&p, ExtOptions::default(), &mut Namer::new());
    let m = finite_model_oracle(&cs, &BTreeSet::new(), &OracleLimits::default());
    assert_eq!(m.model().expect("countermodel").sizes[&crate::term::Type::Iota], 2);
}

#[test]
fn disabled_rules_leave_no_trace() {
    let text = "thf(a, type, a: $i).\nthf(b, type, b: $i).\n\
                thf(h, axiom, ![P: $i > $o]: ((P @ a) => (P @ b))).\nthf(c, conjecture, a = b).";
    let r = run(
        text,
        Overrides {
            no_leib_eq: true,
            no_andr_eq: true,
            ps: Some(crate::calculus::PrimSubstMode::Off),
            ..Overrides::default()
        },
    );
    for rule in [rules::LEIB_EQ, rules::ANDR_EQ, rules::PRIM_SUBST] {
        assert!(!r.trace_has(rule), "{rule}");
    }
}

#[test]
fn deterministic_without_backend() {
    let text = "thf(a, type, a: $i).\nthf(b, type, b: $i).\n\
                thf(h, axiom, ![P: $i > $o]: ((P @ a) => (P @ b))).\nthf(c, conjecture, a = b).";
    let o = Overrides {
        no_backend: true,
        ..Overrides::default()
    };
    let (r1, r2) = (run(text, o.clone()), run(text, o));
    assert_eq!(r1.status, r2.status);
    assert_eq!(r1.trace, r2.trace);
}

#[test]
fn leibniz_hypothesis_needs_leib_eq_without_guessing() {
    let text = "thf(a, type, a: $i).\nthf(b, type, b: $i).\n\
                thf(h, axiom, ![P: $i > $o]: ((P @ a) => (P @ b))).\nthf(c, conjecture, a = b).";
    let ps0 = Overrides {
        ps: Some(crate::calculus::PrimSubstMode::Off),
        no_backend: true,
        ..Overrides::default()
    };
    let r = run(text, ps0.clone());
    assert_eq!(r.status, SzsStatus::Theorem);
    assert!(r.proof_rules().contains(&rules::LEIB_EQ.to_string()));
    let without = Overrides {
        no_leib_eq: true,
        no_andr_eq: true,
        ..ps0
    };
    assert_ne!(run(text, without).status, SzsStatus::Theorem);
}

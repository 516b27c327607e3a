mod support;

use std::collections::BTreeSet;
use std::path::Path;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hol_core::clause::Clause;
use hol_core::clausify::{clausify, ExtOptions, Namer};
use hol_core::model::{find_model, OracleLimits, Verdict};
use hol_core::term::Term;
use hol_core::tptp::{parse_problem, AnnotatedFormula, Language, Problem, Role};

fn problem(fs: &[Term]) -> Problem {
    let mut p = Problem::default();
    for (k, f) in fs.iter().enumerate() {
        let mut cs = BTreeSet::new();
        f.constants(&mut cs);
        p.signature
            .extend(cs.into_iter().filter(|(n, _)| !hol_core::term::logic::is_logical(n)));
        p.formulas.push(AnnotatedFormula {
            name: format!("f{k}"),
            role: Role::Axiom,
            formula: f.clone(),
            language: Language::Thf,
        });
    }
    p
}

fn sat(v: &Verdict) -> Option<bool> {
    match v {
        Verdict::Model(_) => Some(true),
        Verdict::NoModel => Some(false),
        Verdict::Refused(_) => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn clausification_preserves_satisfiability(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs: Vec<Term> = (0..n).map(|_| support::random_formula(&mut rng, 4)).collect();
        let limits = OracleLimits::default();
        let before = find_model(&fs, &BTreeSet::new(), &limits);
        let cs = clausify(&problem(&fs), ExtOptions::default(), &mut Namer::new());
        let after = find_model(&cs.iter().map(Clause::to_formula).collect::<Vec<_>>(), &BTreeSet::new(), &limits);
        if let (Some(x), Some(y)) = (sat(&before), sat(&after)) {
            prop_assert_eq!(x, y, "{:?} vs {:?}", fs.iter().map(|f| f.to_string()).collect::<Vec<_>>(), cs);
        }
    }
}

#[test]
fn skolem_symbols_are_fresh() {
    let p = parse_problem(
        "fof(a, axiom, p(sk0, sk2)).\nfof(b, axiom, ![X]: ?[Y]: r(X, Y)).\nfof(c, axiom, ?[Z]: q(Z)).",
        Path::new("."),
    )
    .unwrap();
    let mut namer = Namer::new();
    clausify(&p, ExtOptions::default(), &mut namer);
    let names: Vec<_> = namer.introduced.iter().map(|(n, _)| n.clone()).collect();
    assert_eq!(names.len(), 2);
    let unique: BTreeSet<_> = names.iter().collect();
    assert_eq!(unique.len(), names.len());
    for n in &names {
        assert!(!p.signature.contains_key(n), "{n} collides with the input");
    }
}

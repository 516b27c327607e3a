mod support;

use std::collections::BTreeMap;
use std::path::Path;

use hol_core::fol::{from_hol, monotone_sorts, sort_of};
use hol_core::model::Verdict;
use hol_core::term::{Name, Term, Type};
use hol_core::tptp::parse_problem;

use support::{extends_to_three, monotonicity_problems, size_two_models};

#[test]
fn reported_monotone_sorts_extend_and_equality_free_ones_are_monotone() {
    let iota = sort_of(&Type::Iota);
    let mut checked = 0;
    for (name, eq_free, text) in monotonicity_problems() {
        let p = parse_problem(&text, Path::new(".")).unwrap();
        let monotone = monotone_sorts(&from_hol(&p).unwrap()).contains(&iota);
        if eq_free {
            assert!(monotone, "{name}: equality-free but reported non-monotone");
        }
        if !monotone {
            continue;
        }
        let fs: Vec<Term> = p.formulas.iter().map(|f| f.formula.clone()).collect();
        let symbols: BTreeMap<Name, Type> = p.signature.clone();
        let models = size_two_models(&fs, &symbols).unwrap();
        for m in &models {
            match extends_to_three(&fs, &symbols, m) {
                Verdict::Model(_) => checked += 1,
                other => panic!("{name}: size-2 model {m} does not extend: {other:?}"),
            }
        }
    }
    assert!(checked > 10, "only {checked} models checked");
}

#[test]
fn a_bounded_domain_is_not_monotone_and_really_does_not_extend() {
    let (_, _, text) = monotonicity_problems()
        .into_iter()
        .find(|(n, _, _)| *n == "two_elements")
        .unwrap();
    let p = parse_problem(&text, Path::new(".")).unwrap();
    assert!(!monotone_sorts(&from_hol(&p).unwrap()).contains(&sort_of(&Type::Iota)));
    let fs: Vec<Term> = p.formulas.iter().map(|f| f.formula.clone()).collect();
    let models = size_two_models(&fs, &p.signature).unwrap();
    assert!(!models.is_empty());
    for m in &models {
        assert_eq!(extends_to_three(&fs, &p.signature, m), Verdict::NoModel);
    }
}

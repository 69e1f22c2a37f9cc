use proptest::prelude::*;
use workbench_core::logic::syntax::{and, eq, imp, not, or};
use workbench_core::logic::Formula;
use workbench_core::reduce::{reduce, Provenance, ReduceError, TruthTableOracle};

fn atom(i: u32) -> Formula {
    eq(i, i)
}

fn prop_formula() -> impl Strategy<Value = Formula> {
    (0u32..3).prop_map(atom).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| imp(a, b)),
        ]
    })
}

/// Truth value under an assignment of the three atoms, written out by hand.
fn truth(f: &Formula, bits: u8) -> bool {
    match f {
        Formula::Eq(i, _) => bits >> i & 1 == 1,
        Formula::Not(g) => !truth(g, bits),
        Formula::And(a, b) => truth(a, bits) && truth(b, bits),
        Formula::Or(a, b) => truth(a, bits) || truth(b, bits),
        Formula::Implies(a, b) => !truth(a, bits) || truth(b, bits),
        _ => unreachable!("only atoms p0..p2 are generated"),
    }
}

fn satisfiable(fs: &[Formula]) -> bool {
    (0u8..8).any(|bits| fs.iter().all(|f| truth(f, bits)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn decided_list_shape_and_soundness(
        f1 in proptest::collection::vec(prop_formula(), 0..3),
        f2 in proptest::collection::vec(prop_formula(), 0..5),
    ) {
        let oracle = TruthTableOracle::default();
        let out = match reduce(&f1, &f2, &oracle) {
            Err(ReduceError::InconsistentBase) => {
                prop_assert!(!satisfiable(&f1));
                return Ok(());
            }
            other => other.unwrap(),
        };
        prop_assert!(satisfiable(&f1));
        prop_assert_eq!(&out.formulas[..f1.len()], &f1[..]);
        prop_assert_eq!(out.formulas.len(), f1.len() + f2.len());
        prop_assert!(satisfiable(&out.formulas));
        for (i, cand) in f2.iter().enumerate() {
            let pos = f1.len() + i;
            let prefix = &out.formulas[..pos];
            let mut with = prefix.to_vec();
            with.push(cand.clone());
            match &out.provenance[pos] {
                Provenance::Kept => {
                    prop_assert_eq!(&out.formulas[pos], cand);
                    prop_assert!(satisfiable(&with));
                }
                Provenance::Negated(_) => {
                    prop_assert_eq!(&out.formulas[pos], &not(cand.clone()));
                    prop_assert!(!satisfiable(&with));
                }
                Provenance::FromBase => prop_assert!(false, "candidate tagged as base"),
            }
        }
        prop_assert!(out.warnings.is_empty());
    }

    #[test]
    fn reducing_a_decided_list_again_changes_nothing(
        f1 in proptest::collection::vec(prop_formula(), 0..2),
        f2 in proptest::collection::vec(prop_formula(), 0..5),
    ) {
        let oracle = TruthTableOracle::default();
        if let Ok(out) = reduce(&f1, &f2, &oracle) {
            let again = reduce(&f1, &out.formulas[f1.len()..], &oracle).unwrap();
            prop_assert_eq!(&again.formulas, &out.formulas);
            prop_assert!(again.provenance[f1.len()..].iter().all(|p| *p == Provenance::Kept));
        }
    }
}

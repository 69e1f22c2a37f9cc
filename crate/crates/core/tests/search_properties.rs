use proptest::prelude::*;
use workbench_core::knowledge_table::build_table;
use workbench_core::machine::{decode_program, encode_program, Instruction, Program};
use workbench_core::search::{
    decide_membership, decode_pair, dovetail, encode_pair, factorize, find_divisor, iteration_bound,
    minimal_divisor, trial_division, Language, Membership, Parity, SearchConfig, SearchStatus,
};

fn printer(v: u64, padding: usize) -> Program {
    let mut ins = vec![Instruction::Mov(7, 7); padding];
    ins.push(Instruction::Const(0, v));
    ins.push(Instruction::Halt);
    Program::new(ins)
}

fn parity_config(count: u64, workers: usize) -> SearchConfig {
    let lang = Parity::default();
    let table = build_table(&(0..count).map(|n| lang.witness(n).unwrap()).collect::<Vec<_>>()).unwrap();
    SearchConfig { z_bound: 16, round_budget: 400, workers, ..Default::default() }.plant(
        13,
        table.compile().program,
        1,
        "parity witness table",
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_coding_roundtrips(tag in any::<bool>(), y in 0u64..(1 << 62)) {
        prop_assert_eq!(decode_pair(encode_pair(tag, y)), (tag, y));
    }

    #[test]
    fn outcome_ignores_worker_count(
        z in 1u64..40,
        plants in proptest::collection::vec((0u64..40, 0u64..30, 0usize..20), 0..5),
        input in 0u64..1000,
        target in 0u64..30,
    ) {
        let mut config = SearchConfig { z_bound: z, round_budget: 60, ..Default::default() };
        let mut used = std::collections::BTreeSet::new();
        for (i, v, pad) in plants {
            if i < z && used.insert(i) {
                config = config.plant(i, printer(v, pad), 0, "printer");
            }
        }
        let accept = |h: &workbench_core::search::Halt| (h.output == target).then_some(h.steps);
        let one = dovetail(&config, &[input], accept).unwrap();
        for workers in [2, 8] {
            let many = dovetail(&SearchConfig { workers, ..config.clone() }, &[input], accept).unwrap();
            prop_assert_eq!(&many, &one);
        }
    }

    #[test]
    fn found_witness_reruns_standalone(z in 1u64..64, input in 0u64..100, target in 0u64..4) {
        let config = SearchConfig { z_bound: z, round_budget: 50, ..Default::default() };
        let out = dovetail(&config, &[input], |h| (h.output == target).then_some(h.steps)).unwrap();
        if let SearchStatus::Found { witness, program_index, rounds, detail, .. } = out.status {
            prop_assert_eq!(witness, target);
            // HALT costs the step of the round it halts in; running off the end costs none
            prop_assert!(detail == rounds || detail + 1 == rounds);
            match workbench_core::machine::run(&config.program(program_index), &[input], 50) {
                workbench_core::machine::RunOutcome::Halted { output, steps } => {
                    prop_assert_eq!(output, target);
                    prop_assert_eq!(steps, detail);
                }
                other => prop_assert!(false, "not halted: {other:?}"),
            }
        }
    }

    #[test]
    fn recoded_verifiers_decide_alike(n in 0u64..300) {
        let vp = Parity::default().verifiers().clone();
        let mut recoded = vp.clone();
        recoded.m1 = decode_program(&encode_program(&vp.m1));
        recoded.m2 = decode_program(&encode_program(&vp.m2));
        for y in 0..=n / 2 + 1 {
            prop_assert_eq!(vp.positive(n, y), recoded.positive(n, y));
            prop_assert_eq!(vp.negative(n, y), recoded.negative(n, y));
        }
    }

    #[test]
    fn factorization_matches_trial_division(n in 2u64..1_000_000) {
        let config = SearchConfig { z_bound: 4, round_budget: 8, ..Default::default() };
        let f = factorize(n, &config, true).unwrap();
        prop_assert_eq!(&f.primes, &trial_division(n));
        for s in &f.splits {
            prop_assert!(1 < s.divisor && s.divisor < s.n && s.n % s.divisor == 0);
        }
    }
}

#[test]
fn parity_membership_is_sound_and_bounded() {
    let lang = Parity::default();
    let config = parity_config(256, 1);
    for n in 0..256 {
        let out = decide_membership(n, lang.verifiers(), &config).unwrap();
        let SearchStatus::Found { detail, rounds, .. } = out.status else { panic!("n={n} exhausted") };
        match detail {
            Membership::In { certificate } => assert!(n % 2 == 0 && lang.verifiers().positive(n, certificate)),
            Membership::Out { certificate } => assert!(n % 2 == 1 && lang.verifiers().negative(n, certificate)),
        }
        let k = lang.witness(n).unwrap();
        assert!(rounds as u128 <= iteration_bound(n, k, &config), "n={n} rounds={rounds}");
    }
}

#[test]
fn divisor_search_prints_real_divisors() {
    let seq: Vec<u64> = (0..512).map(|n| minimal_divisor(n).unwrap_or(0)).collect();
    let config = SearchConfig { z_bound: 12, round_budget: 200, ..Default::default() }.plant(
        7,
        build_table(&seq).unwrap().compile().program,
        1,
        "minimal divisor table",
    );
    for n in 4..512 {
        if let Ok(found) = find_divisor(n, &config) {
            assert!(1 < found.divisor && found.divisor < n && n % found.divisor == 0);
        } else {
            assert!(workbench_core::search::is_prime(n), "composite {n} not split");
        }
    }
}

use std::collections::BTreeMap;

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use workbench_core::machine::{
    decode_program, encode_program, run, step, Instruction, MachineState, Program, RunOutcome,
};

fn instruction(len: usize) -> impl Strategy<Value = Instruction> {
    let r = || 0u8..10;
    let target = move || 0..=len;
    prop_oneof![
        (r(), 0u64..1000).prop_map(|(a, v)| Instruction::Const(a, v)),
        (r(), r()).prop_map(|(a, b)| Instruction::Mov(a, b)),
        (r(), r(), r()).prop_map(|(a, b, c)| Instruction::Add(a, b, c)),
        (r(), r(), r()).prop_map(|(a, b, c)| Instruction::Monus(a, b, c)),
        (r(), r(), r()).prop_map(|(a, b, c)| Instruction::Mul(a, b, c)),
        (r(), target()).prop_map(|(a, t)| Instruction::Jz(a, t)),
        target().prop_map(Instruction::Jmp),
        (r(), r()).prop_map(|(a, b)| Instruction::LoadI(a, b)),
        (r(), r()).prop_map(|(a, b)| Instruction::StoreI(a, b)),
        (r(), 0u64..20).prop_map(|(a, o)| Instruction::JmpT(a, o)),
        Just(Instruction::Halt),
    ]
}

fn program() -> impl Strategy<Value = Program> {
    (1usize..12).prop_flat_map(|len| {
        (proptest::collection::vec(instruction(len), len), proptest::collection::vec(0u64..50, 0..6))
            .prop_map(|(ins, data)| Program::with_data(ins, data))
    })
}

fn trajectory(p: &Program, input: &[u64], steps: usize) -> Vec<MachineState> {
    let mut out = vec![MachineState::new(p, input)];
    for _ in 0..steps {
        let next = step(out.last().unwrap(), p);
        out.push(next);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn code_roundtrip(p in program()) {
        prop_assert_eq!(decode_program(&encode_program(&p)), p);
    }

    #[test]
    fn coding_commutes_with_simulation(p in program(), x in 0u64..100) {
        let recoded = decode_program(&encode_program(&p));
        prop_assert_eq!(trajectory(&p, &[x], 60), trajectory(&recoded, &[x], 60));
    }

    #[test]
    fn steps_count_exactly(p in program(), x in 0u64..100) {
        let t = trajectory(&p, &[x], 60);
        for w in t.windows(2) {
            if w[0].halted {
                prop_assert_eq!(&w[1], &w[0]);
            } else {
                prop_assert_eq!(w[1].steps, w[0].steps + 1);
            }
        }
        match run(&p, &[x], 60) {
            RunOutcome::Halted { output, steps } => {
                prop_assert!(steps <= 60);
                let s = &t[steps as usize];
                prop_assert!(s.halted);
                prop_assert_eq!(s.output(), output);
            }
            RunOutcome::BudgetExhausted { state } => prop_assert_eq!(&state, &t[60]),
        }
    }

    #[test]
    fn budgets_extend(p in program(), x in 0u64..100, b in 0u64..40) {
        // a run cut short and resumed ends where a single longer run ends
        let long = run(&p, &[x], 80);
        if let RunOutcome::BudgetExhausted { mut state } = run(&p, &[x], b) {
            while !state.halted && state.steps < 80 {
                state.step_mut(&p);
            }
            match long {
                RunOutcome::Halted { output, steps } => {
                    prop_assert!(state.halted);
                    prop_assert_eq!((state.output(), state.steps), (output, steps));
                }
                RunOutcome::BudgetExhausted { state: l } => prop_assert_eq!(state, l),
            }
        }
    }

    #[test]
    fn every_number_is_a_valid_program(bytes in proptest::collection::vec(any::<u8>(), 0..40)) {
        let p = decode_program(&BigUint::from_bytes_le(&bytes));
        prop_assert!(p.validate().is_ok());
    }
}

fn random_state(rng: &mut ChaCha8Rng, p: &Program) -> MachineState {
    let mut registers = [0u64; 10];
    for r in &mut registers {
        *r = if rng.gen_bool(0.2) { rng.gen() } else { rng.gen_range(0..64) };
    }
    let mut memory = BTreeMap::new();
    for _ in 0..rng.gen_range(0..4) {
        memory.insert(rng.gen_range(0..16), rng.gen_range(0..64));
    }
    MachineState { registers, memory, pc: rng.gen_range(0..p.len()), steps: rng.gen_range(0..1000), halted: rng.gen_bool(0.1) }
}

#[test]
fn step_is_a_function_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let programs: Vec<Program> = (0..100).map(|_| program().new_tree(&mut runner).unwrap().current()).collect();
    for i in 0..100_000 {
        let p = &programs[i % programs.len()];
        let s = random_state(&mut rng, p);
        let a = step(&s, p);
        let b = step(&s.clone(), p);
        assert_eq!(a, b);
        if !s.halted {
            assert_eq!(a.steps, s.steps + 1);
        } else {
            assert_eq!(a, s);
        }
    }
}

//! Kolmogorov upper bounds, the threshold `L(T)` and Chaitin's proof-searching machine.
//!
//! `Kol` is relative to a reference machine; here that is the register
//! machine of [`crate::machine`] with programs measured by the length of their
//! compact code text.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec;
use crate::logic::{enumerate_proofs, EffectiveTheory, Formula, Proof};
use crate::machine::{program_alphabet, MachineState, Program};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KolEstimate {
    pub x: u64,
    pub bound: Option<usize>,
    pub witness_program: Option<Program>,
    /// Decimal code of the witness.
    pub witness_code: Option<String>,
    pub max_len: usize,
    pub step_budget: u64,
}

/// Every distinct program whose compact text has at most `max_len` symbols,
/// in code order.
pub fn programs_up_to(max_len: usize) -> Vec<(u128, Program)> {
    let alphabet = program_alphabet();
    let end = codec::first_code_of_length(max_len + 1, alphabet);
    let end = u128::try_from(end).expect("program length budget too large to enumerate");
    (0..end)
        .into_par_iter()
        .filter_map(|code| {
            let text = codec::decode_u128(code, alphabet);
            let p = Program::from_code_text(&text);
            (p.to_code_text() == text).then_some((code, p))
        })
        .collect()
}

/// Shortest program of length at most `max_len` printing `x` within
/// `step_budget` steps.
///
/// All candidates are dovetailed: each round advances every live program by
/// one step. Among programs that halt with output `x` the shortest wins,
/// ties going to the lower code.
pub fn kol_upper(x: u64, max_len: usize, step_budget: u64) -> KolEstimate {
    let programs = programs_up_to(max_len);
    let mut states: Vec<MachineState> = programs.iter().map(|(_, p)| MachineState::new(p, &[])).collect();
    let mut best: Option<(usize, u128)> = None;
    let consider = |i: usize, best: &mut Option<(usize, u128)>| {
        let (code, p) = &programs[i];
        let key = (p.to_code_text().chars().count(), *code);
        if best.is_none_or(|b| key < b) {
            *best = Some(key);
        }
    };
    for (i, s) in states.iter().enumerate() {
        if s.halted && s.output() == x {
            consider(i, &mut best);
        }
    }
    let mut live: Vec<usize> = (0..states.len()).filter(|&i| !states[i].halted).collect();
    let mut round = 0;
    while round < step_budget && !live.is_empty() {
        round += 1;
        let progs = &programs;
        let mut stepped: Vec<(usize, MachineState)> = live
            .par_iter()
            .map(|&i| {
                let mut s = states[i].clone();
                s.step_mut(&progs[i].1);
                (i, s)
            })
            .collect();
        live.clear();
        for (i, s) in stepped.drain(..) {
            if s.halted {
                if s.output() == x {
                    consider(i, &mut best);
                }
            } else {
                live.push(i);
            }
            states[i] = s;
        }
    }
    let witness = best.map(|(_, code)| programs.iter().find(|(c, _)| *c == code).expect("known code").1.clone());
    KolEstimate {
        x,
        bound: best.map(|(len, _)| len),
        witness_code: best.map(|(_, code)| code.to_string()),
        witness_program: witness,
        max_len,
        step_budget,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LThreshold {
    pub c: u64,
    pub l: u64,
}

/// `l > log2(l) + c`, decided exactly: `l > c` and `2^(l - c) > l`.
pub fn exceeds(l: u64, c: u64) -> bool {
    if l <= c {
        return false;
    }
    let gap = l - c;
    gap >= 64 || (1u64 << gap) > l
}

/// Least `L` with `L > log2(L) + C`, by linear scan.
pub fn l_of_t(c: u64) -> LThreshold {
    let l = (1..).find(|&l| exceeds(l, c)).expect("holds for l = c + 2 at the latest");
    LThreshold { c, l }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaitinHit {
    pub proof: Proof,
    pub x: u64,
    pub code: u128,
}

/// The least-coded proof whose conclusion is `K{l},{x}` for some `x`.
pub fn chaitin_search(theory: &dyn EffectiveTheory, l: u64, code_budget: u128, step_budget: u64) -> Option<ChaitinHit> {
    enumerate_proofs(theory, code_budget, step_budget).find_map(|e| match e.proof.conclusion() {
        Some(&Formula::KolGe(l2, x)) if l2 == l => Some(ChaitinHit { x, code: e.code, proof: e.proof }),
        _ => None,
    })
}

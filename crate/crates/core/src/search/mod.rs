//! Dovetailing universal search.
//!
//! Every program index `y < Z̊` names a machine program: a planted override
//! if one is registered at `y`, otherwise the program decoded from `y`. Each
//! round advances every live program one step on the common input; programs
//! that have halted are then offered to an acceptance test in increasing
//! index order, and the first acceptance ends the search.
//!
//! Nothing here produces the nonstandard bound `Z̊` that would make the
//! search fast for every input. Desk-scale experiments plant a fast program
//! (typically a compiled knowledge table) below `Z̊` and check the search
//! mechanics and round bounds against it.

mod divisor;
mod knowledge;
mod verify;

pub use divisor::*;
pub use knowledge::*;
pub use verify::*;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::machine::{decode_program_u64, MachineState, Program};

/// A program placed at a fixed index, with its registered time constant `c_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Planted {
    pub index: u64,
    pub program: Arc<Program>,
    pub c: u64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Programs `0..z_bound` take part.
    pub z_bound: u64,
    pub round_budget: u64,
    pub planted: Vec<Planted>,
    /// Threads stepping programs within a round; results do not depend on it.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { z_bound: 64, round_budget: 1_000, planted: Vec::new(), workers: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum SearchError {
    #[error("z_bound must be at least 1")]
    EmptyEnumeration,
    #[error("planted index {index} is not below z_bound {z_bound}")]
    PlantOutOfRange { index: u64, z_bound: u64 },
    #[error("two programs planted at index {0}")]
    DuplicatePlant(u64),
    #[error("search exhausted after {rounds} rounds")]
    Exhausted { rounds: u64 },
    #[error("{0} has no nontrivial divisor")]
    NotComposite(u64),
    #[error("{0} is outside the domain (n >= 2 required)")]
    Domain(u64),
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.z_bound == 0 {
            return Err(SearchError::EmptyEnumeration);
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.planted {
            if p.index >= self.z_bound {
                return Err(SearchError::PlantOutOfRange { index: p.index, z_bound: self.z_bound });
            }
            if !seen.insert(p.index) {
                return Err(SearchError::DuplicatePlant(p.index));
            }
        }
        Ok(())
    }

    pub fn plant(mut self, index: u64, program: Program, c: u64, label: impl Into<String>) -> Self {
        self.planted.push(Planted { index, program: Arc::new(program), c, label: label.into() });
        self
    }

    /// The program run at index `y`.
    pub fn program(&self, y: u64) -> Arc<Program> {
        match self.planted.iter().find(|p| p.index == y) {
            Some(p) => p.program.clone(),
            None => Arc::new(decode_program_u64(y)),
        }
    }

    /// Registered constant `c_y`; unregistered programs count as 0.
    pub fn c_of(&self, y: u64) -> u64 {
        self.planted.iter().find(|p| p.index == y).map_or(0, |p| p.c)
    }

    pub fn c_max(&self) -> u64 {
        self.planted.iter().map(|p| p.c).max().unwrap_or(0)
    }

    /// Human-readable provenance of every planted program.
    pub fn provenance(&self) -> Vec<String> {
        self.planted
            .iter()
            .map(|p| format!("index {}: planted {} (c = {})", p.index, p.label, p.c))
            .collect()
    }
}

/// A program that halted during the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Halt {
    pub index: u64,
    pub output: u64,
    /// Standalone runtime of the program on the input.
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus<T> {
    Found { witness: u64, program_index: u64, rounds: u64, total_steps: u64, detail: T },
    Exhausted { rounds: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome<T> {
    pub status: SearchStatus<T>,
    /// Steps executed by each program index.
    pub per_program_steps: Vec<u64>,
}

impl<T> SearchOutcome<T> {
    pub fn rounds(&self) -> u64 {
        match self.status {
            SearchStatus::Found { rounds, .. } | SearchStatus::Exhausted { rounds } => rounds,
        }
    }
}

fn pool(workers: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool cache");
    pools
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool"))
        })
        .clone()
}

/// Run the dovetail on `input`. `accept` sees halted programs in index order
/// after each round and may return a detail value to stop the search.
pub fn dovetail<T>(
    config: &SearchConfig,
    input: &[u64],
    accept: impl Fn(&Halt) -> Option<T>,
) -> Result<SearchOutcome<T>, SearchError> {
    config.validate()?;
    let programs: Vec<Arc<Program>> = (0..config.z_bound).map(|y| config.program(y)).collect();
    let mut states: Vec<MachineState> = programs.iter().map(|p| MachineState::new(p, input)).collect();
    let mut live: Vec<usize> = (0..states.len()).collect();
    let pool = (config.workers > 1).then(|| pool(config.workers));

    let mut round = 0;
    while round < config.round_budget && !live.is_empty() {
        round += 1;
        let step = |i: &usize, s: &mut MachineState| s.step_mut(&programs[*i]);
        let mut live_states: Vec<(usize, MachineState)> =
            live.iter().map(|&i| (i, std::mem::take(&mut states[i]))).collect();
        match &pool {
            Some(pool) => pool.install(|| live_states.par_iter_mut().for_each(|(i, s)| step(i, s))),
            None => live_states.iter_mut().for_each(|(i, s)| step(i, s)),
        }
        let mut still_live = Vec::with_capacity(live.len());
        let mut found = None;
        for (i, s) in live_states {
            if s.halted && found.is_none() {
                let halt = Halt { index: i as u64, output: s.output(), steps: s.steps };
                if let Some(detail) = accept(&halt) {
                    found = Some((halt, detail));
                }
            } else if !s.halted {
                still_live.push(i);
            }
            states[i] = s;
        }
        live = still_live;
        if let Some((halt, detail)) = found {
            let per_program_steps: Vec<u64> = states.iter().map(|s| s.steps).collect();
            return Ok(SearchOutcome {
                status: SearchStatus::Found {
                    witness: halt.output,
                    program_index: halt.index,
                    rounds: round,
                    total_steps: per_program_steps.iter().sum(),
                    detail,
                },
                per_program_steps,
            });
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Exhausted { rounds: round },
        per_program_steps: states.iter().map(|s| s.steps).collect(),
    })
}

/// `floor(Z̊ · (log2(n+1) + log2(k+1) + c_max))`, computed exactly.
pub fn iteration_bound(n: u64, k: u64, config: &SearchConfig) -> u128 {
    let z = config.z_bound;
    let m = BigUint::from(n as u128 + 1) * BigUint::from(k as u128 + 1);
    // floor(z * log2 m) = floor(log2(m^z)) = bits(m^z) - 1
    let log_part = (num_traits::pow(m, z as usize).bits() - 1) as u128;
    log_part + z as u128 * config.c_max() as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Instruction;

    fn printer(v: u64, padding: usize) -> Program {
        let mut ins = vec![Instruction::Mov(5, 5); padding];
        ins.push(Instruction::Const(0, v));
        ins.push(Instruction::Halt);
        Program::new(ins)
    }

    #[test]
    fn first_program_halts_in_round_one() {
        let config = SearchConfig { z_bound: 1, round_budget: 5, ..Default::default() };
        let out = dovetail(&config, &[], |_| Some(())).unwrap();
        assert_eq!(out.status, SearchStatus::Found { witness: 0, program_index: 0, rounds: 1, total_steps: 0, detail: () });
    }

    #[test]
    fn planted_printer_found_at_its_runtime() {
        let config = SearchConfig { z_bound: 8, round_budget: 100, ..Default::default() }.plant(3, printer(42, 4), 0, "printer");
        let out = dovetail(&config, &[], |h| (h.output == 42).then_some(())).unwrap();
        let SearchStatus::Found { witness, program_index, rounds, .. } = out.status else { panic!() };
        assert_eq!((witness, program_index, rounds), (42, 3, 6));
    }

    #[test]
    fn ties_go_to_the_lower_index() {
        let config = SearchConfig { z_bound: 8, round_budget: 100, ..Default::default() }
            .plant(6, printer(7, 2), 0, "late")
            .plant(5, printer(7, 2), 0, "early");
        for workers in [1, 4] {
            let config = SearchConfig { workers, ..config.clone() };
            let out = dovetail(&config, &[], |h| (h.output == 7).then_some(())).unwrap();
            assert!(matches!(out.status, SearchStatus::Found { program_index: 5, rounds: 4, .. }));
        }
    }

    #[test]
    fn exhaustion_and_validation() {
        let config = SearchConfig { z_bound: 1, round_budget: 3, ..Default::default() };
        let out = dovetail(&config, &[], |_| None::<()>).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted { rounds: 1 });
        let bad = SearchConfig { z_bound: 2, ..Default::default() }.plant(2, Program::default(), 0, "x");
        assert!(matches!(bad.validate(), Err(SearchError::PlantOutOfRange { .. })));
        assert!(matches!(
            SearchConfig { z_bound: 0, ..Default::default() }.validate(),
            Err(SearchError::EmptyEnumeration)
        ));
    }

    #[test]
    fn bound_formula() {
        let c1 = SearchConfig { z_bound: 1, ..Default::default() }.plant(0, Program::default(), 1, "c");
        assert_eq!(iteration_bound(0, 0, &c1), 1);
        // 3 * (log2 6 + log2 4 + 1) = 3 * 5.585 = 16.75
        let c3 = SearchConfig { z_bound: 3, ..c1.clone() };
        assert_eq!(iteration_bound(5, 3, &c3), 16);
        for n in 0..50 {
            assert!(iteration_bound(n + 1, 7, &c3) >= iteration_bound(n, 7, &c3));
            assert!(iteration_bound(7, n + 1, &c3) >= iteration_bound(7, n, &c3));
        }
    }
}

//! Binary-tree knowledge tables compiled into exact-time lookup machines.
//!
//! A sequence `a_0..a_ž` is laid out as an implicit binary tree: node 1 (the
//! root) holds `a_1` and node `n` has children `2n` and `2n + 1`, so the node
//! reached from the root by following the bits of `k` after its leading 1
//! (0 = left, 1 = right, most significant first) is node `k` itself. `a_0`
//! lives in a dedicated slot, memory address 0, outside the tree.
//!
//! The compiled program answers query `k` (in `R1`) with `a_k` (in `R0`) in
//! exactly `ceil(log2(k+1) + log2(a_k+1) + 1)` steps:
//!
//! ```text
//! 0:      JMPT R1 OFF        ; pc <- entry[k], read from the dispatch block
//! 1..=M:  LOADI R0 R1        ; idempotent load of node k, repeated
//! ```
//!
//! `entry[k]` is chosen so that exactly `T(k) - 1` loads run before the
//! program falls off the end. When `T(k) = 1` (only `k = 0, a_0 = 0`) the
//! entry is the end of the program and `R0` keeps its initial 0.

use serde::{Deserialize, Serialize};

use crate::machine::{self, Instruction, Program, RunOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("a knowledge table needs at least a_0")]
    EmptySequence,
    #[error("index {k} is outside the table (length {len})")]
    IndexOutOfRange { k: u64, len: u64 },
    #[error("table file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeTable {
    values: Vec<u64>,
}

/// `ceil(log2(m))` for `m >= 1`.
pub fn ceil_log2(m: u128) -> u32 {
    assert!(m >= 1, "ceil_log2 of 0");
    128 - (m - 1).leading_zeros()
}

/// Exact step count of a query: `ceil(log2(k+1) + log2(a+1) + 1)`.
///
/// The two logarithms are summed before rounding, i.e. `ceil(log2((k+1)(a+1))) + 1`.
pub fn query_steps(k: u64, a: u64) -> u64 {
    ceil_log2((k as u128 + 1) * (a as u128 + 1)) as u64 + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

/// Root-to-node path for `k >= 1`: nodes visited, starting at the root.
pub fn navigation_path(k: u64) -> Vec<u64> {
    assert!(k >= 1, "a_0 is not stored in the tree");
    let bits = 64 - k.leading_zeros();
    let mut node = 1u64;
    let mut path = vec![node];
    for i in (0..bits - 1).rev() {
        node = 2 * node + ((k >> i) & 1);
        path.push(node);
    }
    path
}

pub fn directions(k: u64) -> Vec<Direction> {
    navigation_path(k)
        .windows(2)
        .map(|w| if w[1] == 2 * w[0] { Direction::Left } else { Direction::Right })
        .collect()
}

impl KnowledgeTable {
    pub fn build(seq: &[u64]) -> Result<Self, TableError> {
        if seq.is_empty() {
            return Err(TableError::EmptySequence);
        }
        Ok(KnowledgeTable { values: seq.to_vec() })
    }

    /// Largest valid index `ž`.
    pub fn length(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// Minimal `z` with `ž <= 2^z`.
    pub fn depth(&self) -> u32 {
        ceil_log2(self.length().max(1) as u128)
    }

    pub fn a0_slot(&self) -> u64 {
        self.values[0]
    }

    /// Value held at tree node `n`, for `1 <= n <= ž`.
    pub fn node(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.values.get(n as usize).copied()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, k: u64) -> Result<u64, TableError> {
        self.values
            .get(k as usize)
            .copied()
            .ok_or(TableError::IndexOutOfRange { k, len: self.length() })
    }

    pub fn compile(&self) -> CompiledTable {
        let zlen = self.length();
        let offset = zlen + 1;
        let times: Vec<u64> = self.values.iter().enumerate().map(|(k, &a)| query_steps(k as u64, a)).collect();
        let loads = times.iter().copied().max().unwrap_or(1) - 1;
        let len = loads + 1;

        let mut instructions = Vec::with_capacity(len as usize);
        instructions.push(Instruction::JmpT(1, offset));
        instructions.extend(std::iter::repeat(Instruction::LoadI(0, 1)).take(loads as usize));

        let mut data = self.values.clone();
        data.extend(times.iter().map(|&t| len + 1 - t));

        CompiledTable { table: self.clone(), program: Program::with_data(instructions, data) }
    }

    /// File layout: `KTBL`, version (u16 BE), `ž` (u64 BE), then `ž+1` values,
    /// each a u32 BE byte count followed by the minimal big-endian bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(14 + self.values.len() * 8);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_be_bytes());
        out.extend_from_slice(&self.length().to_be_bytes());
        for &v in &self.values {
            let bytes = v.to_be_bytes();
            let skip = bytes.iter().take_while(|&&b| b == 0).count();
            out.extend_from_slice(&((8 - skip) as u32).to_be_bytes());
            out.extend_from_slice(&bytes[skip..]);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, TableError> {
        let bad = |m: &str| TableError::Format(m.to_string());
        let mut cur = bytes;
        let mut take = |n: usize| -> Result<&[u8], TableError> {
            if cur.len() < n {
                return Err(bad("truncated"));
            }
            let (head, rest) = cur.split_at(n);
            cur = rest;
            Ok(head)
        };
        if take(4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u16::from_be_bytes(take(2)?.try_into().unwrap());
        if version != VERSION {
            return Err(TableError::Format(format!("unsupported version {version}")));
        }
        let zlen = u64::from_be_bytes(take(8)?.try_into().unwrap());
        let count = zlen.checked_add(1).ok_or_else(|| bad("length overflow"))?;
        let mut values = Vec::new();
        for _ in 0..count {
            let n = u32::from_be_bytes(take(4)?.try_into().unwrap()) as usize;
            if n > 8 {
                return Err(bad("value wider than 64 bits"));
            }
            let raw = take(n)?;
            values.push(raw.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64));
        }
        if !cur.is_empty() {
            return Err(bad("trailing bytes"));
        }
        KnowledgeTable::build(&values)
    }
}

const MAGIC: &[u8; 4] = b"KTBL";
const VERSION: u16 = 1;

/// A table together with its lookup machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledTable {
    pub table: KnowledgeTable,
    pub program: Program,
}

impl CompiledTable {
    /// Run the lookup machine on `k`; returns `(a_k, measured steps)`.
    pub fn query(&self, k: u64) -> Result<(u64, u64), TableError> {
        let a = self.table.get(k)?;
        match machine::run(&self.program, &[k], query_steps(k, a) + 1) {
            RunOutcome::Halted { output, steps } => Ok((output, steps)),
            RunOutcome::BudgetExhausted { .. } => unreachable!("lookup machine always halts within its bound"),
        }
    }
}

pub fn build_table(seq: &[u64]) -> Result<KnowledgeTable, TableError> {
    KnowledgeTable::build(seq)
}

pub fn compile(table: &KnowledgeTable) -> Program {
    table.compile().program
}

pub fn query(table: &KnowledgeTable, k: u64) -> Result<(u64, u64), TableError> {
    table.compile().query(k)
}

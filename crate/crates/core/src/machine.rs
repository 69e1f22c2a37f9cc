//! Step-exact register machine.
//!
//! Ten registers `R0..R9` and a sparse word-addressed memory, all holding
//! naturals (`u64`, with saturating arithmetic). Every executed instruction,
//! `HALT` included, costs exactly one step. Running off the end of the
//! instruction list halts without costing a step, so the empty program halts
//! at time 0 with output `R0 = 0`.
//!
//! Programs have a compact textual form over [`program_alphabet`]; its
//! bijective-numeral code is the program's number. Decoding is total: any
//! malformed instruction field decodes to `HALT`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::codec::{self, Alphabet};

pub const REGISTERS: usize = 10;

pub type Reg = u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    Const(Reg, u64),
    Mov(Reg, Reg),
    Add(Reg, Reg, Reg),
    /// Truncated subtraction.
    Monus(Reg, Reg, Reg),
    Mul(Reg, Reg, Reg),
    /// Jump to the absolute target if the register is zero.
    Jz(Reg, usize),
    Jmp(usize),
    /// `dst <- memory[addr_reg]`
    LoadI(Reg, Reg),
    /// `memory[addr_reg] <- src`
    StoreI(Reg, Reg),
    /// `pc <- memory[R[r] + offset]`: one-step jump through a table held in memory.
    JmpT(Reg, u64),
    Halt,
}

impl Instruction {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Const(..) => "CONST",
            Instruction::Mov(..) => "MOV",
            Instruction::Add(..) => "ADD",
            Instruction::Monus(..) => "MONUS",
            Instruction::Mul(..) => "MUL",
            Instruction::Jz(..) => "JZ",
            Instruction::Jmp(..) => "JMP",
            Instruction::LoadI(..) => "LOADI",
            Instruction::StoreI(..) => "STOREI",
            Instruction::JmpT(..) => "JMPT",
            Instruction::Halt => "HALT",
        }
    }

    fn registers(&self) -> impl Iterator<Item = Reg> {
        let regs: [Option<Reg>; 3] = match *self {
            Instruction::Const(r, _) | Instruction::Jz(r, _) | Instruction::JmpT(r, _) => [Some(r), None, None],
            Instruction::Mov(a, b) | Instruction::LoadI(a, b) | Instruction::StoreI(a, b) => [Some(a), Some(b), None],
            Instruction::Add(a, b, c) | Instruction::Monus(a, b, c) | Instruction::Mul(a, b, c) => {
                [Some(a), Some(b), Some(c)]
            }
            Instruction::Jmp(_) | Instruction::Halt => [None, None, None],
        };
        regs.into_iter().flatten()
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic();
        match *self {
            Instruction::Const(r, v) => write!(f, "{m} R{r} {v}"),
            Instruction::Mov(a, b) | Instruction::LoadI(a, b) | Instruction::StoreI(a, b) => write!(f, "{m} R{a} R{b}"),
            Instruction::Add(a, b, c) | Instruction::Monus(a, b, c) | Instruction::Mul(a, b, c) => {
                write!(f, "{m} R{a} R{b} R{c}")
            }
            Instruction::Jz(r, t) => write!(f, "{m} R{r} {t}"),
            Instruction::Jmp(t) => write!(f, "{m} {t}"),
            Instruction::JmpT(r, o) => write!(f, "{m} R{r} {o}"),
            Instruction::Halt => f.write_str(m),
        }
    }
}

/// Instruction list plus an initial memory image (`data[i]` is loaded at
/// address `i`). The image is part of the machine description, so loading it
/// costs no steps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    pub data: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("register R{0} out of range (R0..R9)")]
    BadRegister(u32),
    #[error("jump target {target} outside 0..={len} at instruction {at}")]
    BadTarget { at: usize, target: usize, len: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        Program { instructions, data: Vec::new() }
    }

    pub fn with_data(instructions: Vec<Instruction>, data: Vec<u64>) -> Self {
        Program { instructions, data }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Registers within range and jump targets inside `0..=len`.
    pub fn validate(&self) -> Result<(), ProgramError> {
        let len = self.len();
        for (at, ins) in self.instructions.iter().enumerate() {
            if let Some(r) = ins.registers().find(|&r| r as usize >= REGISTERS) {
                return Err(ProgramError::BadRegister(r as u32));
            }
            if let Instruction::Jz(_, target) | Instruction::Jmp(target) = *ins {
                if target > len {
                    return Err(ProgramError::BadTarget { at, target, len });
                }
            }
        }
        Ok(())
    }

    /// Canonical compact text, the string whose code is this program's number.
    pub fn to_code_text(&self) -> String {
        fn num(out: &mut String, v: u64) {
            if v != 0 {
                out.push_str(&v.to_string());
            }
        }
        let mut out = String::new();
        for ins in &self.instructions {
            match *ins {
                Instruction::Halt => out.push('H'),
                Instruction::Const(r, v) => {
                    out.push('C');
                    out.push_str(&r.to_string());
                    num(&mut out, v);
                }
                Instruction::Mov(a, b) => out.push_str(&format!("M{a}{b}")),
                Instruction::Add(a, b, c) => out.push_str(&format!("A{a}{b}{c}")),
                Instruction::Monus(a, b, c) => out.push_str(&format!("S{a}{b}{c}")),
                Instruction::Mul(a, b, c) => out.push_str(&format!("U{a}{b}{c}")),
                Instruction::Jz(r, t) => {
                    out.push_str(&format!("Z{r}"));
                    num(&mut out, t as u64);
                }
                Instruction::Jmp(t) => {
                    out.push('J');
                    num(&mut out, t as u64);
                }
                Instruction::LoadI(a, b) => out.push_str(&format!("L{a}{b}")),
                Instruction::StoreI(a, b) => out.push_str(&format!("T{a}{b}")),
                Instruction::JmpT(r, o) => {
                    out.push_str(&format!("X{r}"));
                    num(&mut out, o);
                }
            }
        }
        if !self.data.is_empty() {
            out.push('D');
            for (i, &v) in self.data.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                num(&mut out, v);
            }
        }
        out
    }

    /// Total parse of compact text. Never fails; malformed fields become `HALT`.
    pub fn from_code_text(text: &str) -> Program {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let mut instructions = Vec::new();
        let mut data = Vec::new();

        let reg = |pos: &mut usize| -> Option<Reg> {
            let d = chars.get(*pos)?.to_digit(10)?;
            *pos += 1;
            Some(d as Reg)
        };
        let number = |pos: &mut usize| -> u64 {
            let mut v: u64 = 0;
            while let Some(d) = chars.get(*pos).and_then(|c| c.to_digit(10)) {
                v = v.saturating_mul(10).saturating_add(d as u64);
                *pos += 1;
            }
            v
        };

        while pos < chars.len() {
            let op = chars[pos];
            pos += 1;
            let start = pos;
            let parsed = match op {
                'H' => Some(Instruction::Halt),
                'C' => reg(&mut pos).map(|r| Instruction::Const(r, number(&mut pos))),
                'M' => (|| Some(Instruction::Mov(reg(&mut pos)?, reg(&mut pos)?)))(),
                'A' => (|| Some(Instruction::Add(reg(&mut pos)?, reg(&mut pos)?, reg(&mut pos)?)))(),
                'S' => (|| Some(Instruction::Monus(reg(&mut pos)?, reg(&mut pos)?, reg(&mut pos)?)))(),
                'U' => (|| Some(Instruction::Mul(reg(&mut pos)?, reg(&mut pos)?, reg(&mut pos)?)))(),
                'Z' => reg(&mut pos).map(|r| Instruction::Jz(r, number(&mut pos) as usize)),
                'J' => Some(Instruction::Jmp(number(&mut pos) as usize)),
                'L' => (|| Some(Instruction::LoadI(reg(&mut pos)?, reg(&mut pos)?)))(),
                'T' => (|| Some(Instruction::StoreI(reg(&mut pos)?, reg(&mut pos)?)))(),
                'X' => reg(&mut pos).map(|r| Instruction::JmpT(r, number(&mut pos))),
                'D' => {
                    data.push(number(&mut pos));
                    while chars.get(pos) == Some(&',') {
                        pos += 1;
                        data.push(number(&mut pos));
                    }
                    continue;
                }
                _ => Some(Instruction::Halt),
            };
            match parsed {
                Some(ins) => instructions.push(ins),
                None => {
                    // incomplete register field: the whole field is HALT, resume after the opcode
                    pos = start;
                    instructions.push(Instruction::Halt);
                }
            }
        }

        let len = instructions.len();
        for ins in &mut instructions {
            if let Instruction::Jz(_, t) | Instruction::Jmp(t) = ins {
                *t = (*t).min(len);
            }
        }
        Program { instructions, data }
    }

    /// Human-readable assembly, one instruction per line, data as `.data`.
    pub fn to_assembly(&self) -> String {
        let mut out = String::new();
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        if !self.data.is_empty() {
            out.push_str(".data");
            for v in &self.data {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parse the format written by [`Program::to_assembly`]. `#` starts a comment.
    pub fn from_assembly(text: &str) -> Result<Program, ProgramError> {
        let mut instructions = Vec::new();
        let mut data = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| ProgramError::Syntax { line, msg };
            let mut words = content.split_whitespace();
            let op = words.next().unwrap().to_ascii_uppercase();
            let args: Vec<&str> = words.collect();
            if op == ".DATA" {
                for w in args {
                    data.push(w.parse::<u64>().map_err(|e| err(format!("bad data word {w:?}: {e}")))?);
                }
                continue;
            }
            let r = |k: usize| -> Result<Reg, ProgramError> {
                let w = args.get(k).ok_or_else(|| err(format!("{op}: missing operand {}", k + 1)))?;
                let n = w
                    .strip_prefix(['R', 'r'])
                    .and_then(|d| d.parse::<u32>().ok())
                    .ok_or_else(|| err(format!("{op}: expected register, got {w:?}")))?;
                if n as usize >= REGISTERS {
                    return Err(ProgramError::BadRegister(n));
                }
                Ok(n as Reg)
            };
            let n = |k: usize| -> Result<u64, ProgramError> {
                let w = args.get(k).ok_or_else(|| err(format!("{op}: missing operand {}", k + 1)))?;
                w.parse::<u64>().map_err(|_| err(format!("{op}: expected number, got {w:?}")))
            };
            let arity = match op.as_str() {
                "HALT" => 0,
                "JMP" => 1,
                "CONST" | "MOV" | "JZ" | "LOADI" | "STOREI" | "JMPT" => 2,
                "ADD" | "MONUS" | "MUL" => 3,
                _ => return Err(err(format!("unknown opcode {op:?}"))),
            };
            if args.len() != arity {
                return Err(err(format!("{op} takes {arity} operands, got {}", args.len())));
            }
            let ins = match op.as_str() {
                "HALT" => Instruction::Halt,
                "JMP" => Instruction::Jmp(n(0)? as usize),
                "CONST" => Instruction::Const(r(0)?, n(1)?),
                "MOV" => Instruction::Mov(r(0)?, r(1)?),
                "JZ" => Instruction::Jz(r(0)?, n(1)? as usize),
                "LOADI" => Instruction::LoadI(r(0)?, r(1)?),
                "STOREI" => Instruction::StoreI(r(0)?, r(1)?),
                "JMPT" => Instruction::JmpT(r(0)?, n(1)?),
                "ADD" => Instruction::Add(r(0)?, r(1)?, r(2)?),
                "MONUS" => Instruction::Monus(r(0)?, r(1)?, r(2)?),
                "MUL" => Instruction::Mul(r(0)?, r(1)?, r(2)?),
                _ => unreachable!(),
            };
            instructions.push(ins);
        }
        let p = Program { instructions, data };
        p.validate()?;
        Ok(p)
    }
}

/// Symbols of the compact program text, in numbering order.
pub fn program_alphabet() -> &'static Alphabet {
    static ALPHABET: OnceLock<Alphabet> = OnceLock::new();
    ALPHABET.get_or_init(|| Alphabet::new("program", "HCMASUZJLTXD0123456789,".chars()).expect("static alphabet"))
}

pub fn encode_program(p: &Program) -> BigUint {
    codec::encode(&p.to_code_text(), program_alphabet()).expect("program text uses the program alphabet")
}

pub fn decode_program(n: &BigUint) -> Program {
    Program::from_code_text(&codec::decode(n, program_alphabet()))
}

pub fn decode_program_u64(n: u64) -> Program {
    Program::from_code_text(&codec::decode_u128(n as u128, program_alphabet()))
}

/// Digit length of the program's code, i.e. the length of its compact text.
pub fn program_length(p: &Program) -> usize {
    p.to_code_text().chars().count()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineState {
    pub registers: [u64; REGISTERS],
    /// Words written so far; unwritten addresses read through to the program image, then 0.
    pub memory: BTreeMap<u64, u64>,
    pub pc: usize,
    pub steps: u64,
    pub halted: bool,
}

impl MachineState {
    /// Initial state with `input[i]` in `R(i+1)`. Inputs beyond `R9` are dropped.
    pub fn new(program: &Program, input: &[u64]) -> Self {
        let mut registers = [0u64; REGISTERS];
        for (slot, &v) in registers[1..].iter_mut().zip(input) {
            *slot = v;
        }
        MachineState { registers, memory: BTreeMap::new(), pc: 0, steps: 0, halted: program.is_empty() }
    }

    pub fn output(&self) -> u64 {
        self.registers[0]
    }

    pub fn read(&self, program: &Program, addr: u64) -> u64 {
        if let Some(&v) = self.memory.get(&addr) {
            return v;
        }
        usize::try_from(addr).ok().and_then(|a| program.data.get(a)).copied().unwrap_or(0)
    }

    /// Apply one step in place. Halted states do not change.
    pub fn step_mut(&mut self, program: &Program) {
        if self.halted {
            return;
        }
        let Some(&ins) = program.instructions.get(self.pc) else {
            self.halted = true;
            return;
        };
        let len = program.len();
        let r = |i: Reg| (i as usize).min(REGISTERS - 1);
        let mut next = self.pc + 1;
        match ins {
            Instruction::Const(d, v) => self.registers[r(d)] = v,
            Instruction::Mov(d, s) => self.registers[r(d)] = self.registers[r(s)],
            Instruction::Add(d, a, b) => self.registers[r(d)] = self.registers[r(a)].saturating_add(self.registers[r(b)]),
            Instruction::Monus(d, a, b) => {
                self.registers[r(d)] = self.registers[r(a)].saturating_sub(self.registers[r(b)])
            }
            Instruction::Mul(d, a, b) => self.registers[r(d)] = self.registers[r(a)].saturating_mul(self.registers[r(b)]),
            Instruction::Jz(c, t) => {
                if self.registers[r(c)] == 0 {
                    next = t;
                }
            }
            Instruction::Jmp(t) => next = t,
            Instruction::LoadI(d, a) => {
                let addr = self.registers[r(a)];
                self.registers[r(d)] = self.read(program, addr);
            }
            Instruction::StoreI(s, a) => {
                let addr = self.registers[r(a)];
                self.memory.insert(addr, self.registers[r(s)]);
            }
            Instruction::JmpT(c, off) => {
                let addr = self.registers[r(c)].saturating_add(off);
                next = usize::try_from(self.read(program, addr)).unwrap_or(usize::MAX);
            }
            Instruction::Halt => {
                self.steps += 1;
                self.halted = true;
                return;
            }
        }
        self.steps += 1;
        self.pc = next.min(len);
        if self.pc >= len {
            self.halted = true;
        }
    }
}

/// The single-step operator.
pub fn step(state: &MachineState, program: &Program) -> MachineState {
    let mut next = state.clone();
    next.step_mut(program);
    next
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    Halted { output: u64, steps: u64 },
    BudgetExhausted { state: MachineState },
}

impl RunOutcome {
    pub fn halted(&self) -> Option<(u64, u64)> {
        match *self {
            RunOutcome::Halted { output, steps } => Some((output, steps)),
            RunOutcome::BudgetExhausted { .. } => None,
        }
    }
}

pub fn run(program: &Program, input: &[u64], budget: u64) -> RunOutcome {
    let mut state = MachineState::new(program, input);
    while !state.halted && state.steps < budget {
        state.step_mut(program);
    }
    if state.halted {
        RunOutcome::Halted { output: state.output(), steps: state.steps }
    } else {
        RunOutcome::BudgetExhausted { state }
    }
}

/// One executed step: `step,pc,opcode,regs-delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub step: u64,
    pub pc: usize,
    pub opcode: &'static str,
    pub delta: Vec<String>,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.step, self.pc, self.opcode, self.delta.join(";"))
    }
}

pub fn run_traced(program: &Program, input: &[u64], budget: u64) -> (RunOutcome, Vec<TraceLine>) {
    let mut state = MachineState::new(program, input);
    let mut trace = Vec::new();
    while !state.halted && state.steps < budget {
        let before = state.clone();
        let opcode = program.instructions.get(state.pc).map_or("FALLOFF", Instruction::mnemonic);
        state.step_mut(program);
        if state.steps == before.steps {
            break;
        }
        let mut delta: Vec<String> = (0..REGISTERS)
            .filter(|&i| before.registers[i] != state.registers[i])
            .map(|i| format!("R{i}={}", state.registers[i]))
            .collect();
        for (addr, v) in &state.memory {
            if before.memory.get(addr) != Some(v) {
                delta.push(format!("M[{addr}]={v}"));
            }
        }
        trace.push(TraceLine { step: state.steps, pc: before.pc, opcode, delta });
    }
    let outcome = if state.halted {
        RunOutcome::Halted { output: state.output(), steps: state.steps }
    } else {
        RunOutcome::BudgetExhausted { state }
    };
    (outcome, trace)
}

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::parse::parse_formula;
use super::syntax::{logic_alphabet, Formula};
use super::zfc;
use crate::codec;
use crate::machine::{self, Instruction, Program, RunOutcome};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recognition {
    Axiom,
    NotAxiom,
    /// The recognizer did not halt within the step budget.
    OutOfBudget,
}

/// A theory with a decidable axiom set.
pub trait EffectiveTheory: Send + Sync {
    fn name(&self) -> &str;

    fn recognize(&self, f: &Formula, step_budget: u64) -> Recognition;

    /// Budget under which the recognizer is known to halt on every input.
    fn declared_budget(&self) -> u64;

    /// Machine program deciding the axiom set, when one is provided.
    fn recognizer(&self) -> Option<&Program> {
        None
    }

    fn recognizer_code(&self) -> Option<BigUint> {
        self.recognizer().map(machine::encode_program)
    }

    fn is_axiom(&self, f: &Formula) -> bool {
        self.recognize(f, self.declared_budget()) == Recognition::Axiom
    }
}

/// Gödel code of a formula over the logic alphabet.
pub fn godel_code(f: &Formula) -> BigUint {
    codec::encode(&f.to_string(), logic_alphabet()).expect("printed formulas use the logic alphabet")
}

/// ZFC, recognised natively: the schemas are matched structurally.
#[derive(Debug, Default, Clone, Copy)]
pub struct ZfcTheory;

impl EffectiveTheory for ZfcTheory {
    fn name(&self) -> &str {
        "zfc"
    }
    fn recognize(&self, f: &Formula, _step_budget: u64) -> Recognition {
        if zfc::is_zfc_axiom(f) {
            Recognition::Axiom
        } else {
            Recognition::NotAxiom
        }
    }
    fn declared_budget(&self) -> u64 {
        u64::MAX
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoryFile {
    pub name: String,
    pub axioms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("axiom {index}: {message}")]
    Axiom { index: usize, message: String },
    #[error("theory file: {0}")]
    Format(String),
}

/// Finitely many axioms, recognised by a straight-line machine that compares
/// the input's Gödel code against each axiom code.
#[derive(Debug, Clone)]
pub struct ToyTheory {
    name: String,
    axioms: Vec<Formula>,
    program: Program,
}

pub const DEFAULT_TOY_AXIOMS: [&str; 3] = ["x∈x", "(x∈x→x1∈x)", "¬x1∈x1"];

impl ToyTheory {
    pub fn new(name: impl Into<String>, axioms: Vec<Formula>) -> Result<Self, TheoryError> {
        let mut codes = Vec::with_capacity(axioms.len());
        for (index, a) in axioms.iter().enumerate() {
            let code = godel_code(a).to_u64().ok_or_else(|| TheoryError::Axiom {
                index,
                message: "code does not fit a machine register".into(),
            })?;
            codes.push(code);
        }
        Ok(ToyTheory { name: name.into(), program: recognizer_for(&codes), axioms })
    }

    pub fn default_theory() -> Self {
        let axioms = DEFAULT_TOY_AXIOMS.iter().map(|s| parse_formula(s).expect("valid axiom")).collect();
        ToyTheory::new("toy", axioms).expect("small axioms")
    }

    pub fn from_json(text: &str) -> Result<Self, TheoryError> {
        let file: TheoryFile = serde_json::from_str(text).map_err(|e| TheoryError::Format(e.to_string()))?;
        let mut axioms = Vec::new();
        for (index, s) in file.axioms.iter().enumerate() {
            axioms.push(parse_formula(s).map_err(|e| TheoryError::Axiom { index, message: e.to_string() })?);
        }
        ToyTheory::new(file.name, axioms)
    }

    pub fn axioms(&self) -> &[Formula] {
        &self.axioms
    }
}

/// `R0 <- 1` iff `R1` equals one of `codes`.
fn recognizer_for(codes: &[u64]) -> Program {
    let accept = 5 * codes.len() + 2;
    let mut ins = Vec::new();
    for &c in codes {
        ins.push(Instruction::Const(2, c));
        ins.push(Instruction::Monus(3, 1, 2));
        ins.push(Instruction::Monus(4, 2, 1));
        ins.push(Instruction::Add(3, 3, 4));
        ins.push(Instruction::Jz(3, accept));
    }
    ins.push(Instruction::Const(0, 0));
    ins.push(Instruction::Halt);
    ins.push(Instruction::Const(0, 1));
    ins.push(Instruction::Halt);
    Program::new(ins)
}

impl EffectiveTheory for ToyTheory {
    fn name(&self) -> &str {
        &self.name
    }

    fn recognize(&self, f: &Formula, step_budget: u64) -> Recognition {
        let Some(code) = godel_code(f).to_u64() else {
            // wider than any axiom code
            return Recognition::NotAxiom;
        };
        match machine::run(&self.program, &[code], step_budget) {
            RunOutcome::Halted { output, .. } if output != 0 => Recognition::Axiom,
            RunOutcome::Halted { .. } => Recognition::NotAxiom,
            RunOutcome::BudgetExhausted { .. } => Recognition::OutOfBudget,
        }
    }

    fn declared_budget(&self) -> u64 {
        self.program.len() as u64
    }

    fn recognizer(&self) -> Option<&Program> {
        Some(&self.program)
    }
}

/// A base theory plus finitely many extra axioms.
#[derive(Clone)]
pub struct ExtendedTheory {
    base: Arc<dyn EffectiveTheory>,
    extra: Vec<Formula>,
    name: String,
}

impl ExtendedTheory {
    pub fn new(base: Arc<dyn EffectiveTheory>, extra: Vec<Formula>) -> Self {
        let name = format!("{}+{}", base.name(), extra.len());
        ExtendedTheory { base, extra, name }
    }
}

impl EffectiveTheory for ExtendedTheory {
    fn name(&self) -> &str {
        &self.name
    }
    fn recognize(&self, f: &Formula, step_budget: u64) -> Recognition {
        if self.extra.contains(f) {
            Recognition::Axiom
        } else {
            self.base.recognize(f, step_budget)
        }
    }
    fn declared_budget(&self) -> u64 {
        self.base.declared_budget()
    }
}

/// Parameters for building a registered theory: optional JSON source text.
#[derive(Debug, Clone, Default)]
pub struct TheoryParams {
    pub source: Option<String>,
}

pub fn theory_registry() -> Registry<TheoryParams, dyn EffectiveTheory> {
    let mut r: Registry<TheoryParams, dyn EffectiveTheory> = Registry::new("theory");
    r.register("zfc", "ZFC with specification and replacement schemas", |_| {
        Ok(Box::new(ZfcTheory) as Box<dyn EffectiveTheory>)
    })
    .expect("fresh registry");
    r.register("toy", "finite axiom list with a machine recognizer (JSON {name, axioms})", |p| {
        let t = match &p.source {
            Some(text) => ToyTheory::from_json(text).map_err(|e| e.to_string())?,
            None => ToyTheory::default_theory(),
        };
        Ok(Box::new(t) as Box<dyn EffectiveTheory>)
    })
    .expect("fresh registry");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_recognizer_matches_axiom_list() {
        let t = ToyTheory::default_theory();
        for a in t.axioms() {
            assert_eq!(t.recognize(a, t.declared_budget()), Recognition::Axiom);
        }
        for s in ["x=x", "x1∈x1", "(x∈x→x1∈x1)"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(t.recognize(&f, t.declared_budget()), Recognition::NotAxiom, "{s}");
        }
        let f = parse_formula("x∈x").unwrap();
        assert_eq!(t.recognize(&f, 2), Recognition::OutOfBudget);
        assert!(t.recognizer_code().is_some());
    }

    #[test]
    fn json_theory() {
        let t = ToyTheory::from_json(r#"{"name":"mine","axioms":["x=x1"]}"#).unwrap();
        assert_eq!(t.name(), "mine");
        assert!(t.is_axiom(&parse_formula("x=x1").unwrap()));
        assert!(ToyTheory::from_json(r#"{"name":"bad","axioms":["x="]}"#).is_err());
    }

    #[test]
    fn registry_names() {
        let r = theory_registry();
        assert_eq!(r.names(), ["toy", "zfc"]);
        assert!(r.build("zfc", &TheoryParams::default()).unwrap().is_axiom(&zfc::pairing()));
    }
}

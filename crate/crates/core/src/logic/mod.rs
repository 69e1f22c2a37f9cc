//! First-order logic over `{∈, =}`: formulas, ZFC, Hilbert proofs and their
//! enumeration in code order.

pub mod enumerate;
pub mod parse;
pub mod proof;
pub mod syntax;
pub mod theory;
pub mod zfc;

pub use enumerate::{enumerate_proofs, EnumeratedProof, ProofEnumerator};
pub use parse::{parse_formula, ParseError};
pub use proof::{
    decode_proof, infer_justifications, logical_axiom, verify_proof, verify_proof_with_budget, AxiomSource,
    Justification, LogicalAxiom, Proof, ProofError, ProofLine,
};
pub use syntax::{logic_alphabet, proof_alphabet, Formula, Var};
pub use theory::{
    godel_code, theory_registry, EffectiveTheory, ExtendedTheory, Recognition, TheoryParams, ToyTheory, ZfcTheory,
};
pub use zfc::is_zfc_axiom;

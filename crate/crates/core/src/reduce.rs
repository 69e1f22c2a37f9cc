//! Folding candidate formulas into a decided list relative to a consistency oracle.
//!
//! Each candidate in turn is appended when the oracle finds it consistent with
//! everything listed so far, and its negation is appended otherwise. Negation
//! is purely syntactic, so `¬¬p` stays `¬¬p`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::logic::syntax::not;
use crate::logic::{enumerate_proofs, EffectiveTheory, ExtendedTheory, Formula, Proof, ToyTheory};
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Refutation {
    /// A proof, in the base theory extended by the listed formulas and the
    /// candidate, containing some formula and its negation.
    Proof(Proof),
    /// An oracle-specific certificate, e.g. an exhausted truth table.
    Certificate { oracle: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Consistent,
    Refuted(Refutation),
    Unknown { budget_spent: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("the base list is inconsistent")]
    InconsistentBase,
    #[error("not a propositional formula: {0}")]
    NonPropositional(Formula),
    #[error("too many atoms for a truth table: {0}")]
    TooManyAtoms(usize),
}

pub trait ConsistencyOracle: Send + Sync {
    fn name(&self) -> &str;
    fn verdict(&self, base: &[Formula], candidate: &Formula) -> Result<Verdict, ReduceError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    FromBase,
    Kept,
    Negated(Refutation),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecidedList {
    pub formulas: Vec<Formula>,
    pub provenance: Vec<Provenance>,
    pub warnings: Vec<String>,
}

pub fn reduce(f1: &[Formula], f2: &[Formula], oracle: &dyn ConsistencyOracle) -> Result<DecidedList, ReduceError> {
    let mut out = DecidedList {
        formulas: f1.to_vec(),
        provenance: vec![Provenance::FromBase; f1.len()],
        warnings: Vec::new(),
    };
    match oracle.verdict(f1, &Formula::top())? {
        Verdict::Consistent => {}
        Verdict::Refuted(_) => return Err(ReduceError::InconsistentBase),
        Verdict::Unknown { budget_spent } => out
            .warnings
            .push(format!("base consistency unknown after budget {budget_spent}; assumed consistent")),
    }
    for (i, cand) in f2.iter().enumerate() {
        match oracle.verdict(&out.formulas, cand)? {
            Verdict::Consistent => {
                out.formulas.push(cand.clone());
                out.provenance.push(Provenance::Kept);
            }
            Verdict::Unknown { budget_spent } => {
                out.warnings.push(format!(
                    "candidate {i} ({cand}) undecided after budget {budget_spent}; kept as consistent"
                ));
                out.formulas.push(cand.clone());
                out.provenance.push(Provenance::Kept);
            }
            Verdict::Refuted(r) => {
                out.formulas.push(not(cand.clone()));
                out.provenance.push(Provenance::Negated(r));
            }
        }
    }
    Ok(out)
}

/// Exact satisfiability on the quantifier-free fragment; every atomic
/// formula is an independent propositional variable.
#[derive(Debug, Clone, Copy)]
pub struct TruthTableOracle {
    pub max_atoms: usize,
}

impl Default for TruthTableOracle {
    fn default() -> Self {
        TruthTableOracle { max_atoms: 20 }
    }
}

fn collect_atoms(f: &Formula, atoms: &mut BTreeMap<Formula, usize>) -> Result<(), ReduceError> {
    match f {
        _ if f.is_atomic() => {
            let next = atoms.len();
            atoms.entry(f.clone()).or_insert(next);
            Ok(())
        }
        Formula::Not(g) => collect_atoms(g, atoms),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, atoms)?;
            collect_atoms(b, atoms)
        }
        _ => Err(ReduceError::NonPropositional(f.clone())),
    }
}

/// Truth value of a propositional formula; `atoms` maps each atom to its bit in `assignment`.
pub fn evaluate(f: &Formula, atoms: &BTreeMap<Formula, usize>, assignment: u64) -> bool {
    match f {
        Formula::Not(g) => !evaluate(g, atoms, assignment),
        Formula::And(a, b) => evaluate(a, atoms, assignment) && evaluate(b, atoms, assignment),
        Formula::Or(a, b) => evaluate(a, atoms, assignment) || evaluate(b, atoms, assignment),
        Formula::Implies(a, b) => !evaluate(a, atoms, assignment) || evaluate(b, atoms, assignment),
        _ => (assignment >> atoms[f]) & 1 == 1,
    }
}

impl TruthTableOracle {
    /// A satisfying assignment of all formulas, as a bit mask over the returned atom numbering.
    pub fn satisfying(&self, formulas: &[&Formula]) -> Result<(BTreeMap<Formula, usize>, Option<u64>), ReduceError> {
        let mut atoms = BTreeMap::new();
        for f in formulas {
            collect_atoms(f, &mut atoms)?;
        }
        if atoms.len() > self.max_atoms {
            return Err(ReduceError::TooManyAtoms(atoms.len()));
        }
        let found = (0..1u64 << atoms.len()).find(|&a| formulas.iter().all(|f| evaluate(f, &atoms, a)));
        Ok((atoms, found))
    }
}

impl ConsistencyOracle for TruthTableOracle {
    fn name(&self) -> &str {
        "truthtable"
    }

    fn verdict(&self, base: &[Formula], candidate: &Formula) -> Result<Verdict, ReduceError> {
        let all: Vec<&Formula> = base.iter().chain([candidate]).collect();
        let (atoms, found) = self.satisfying(&all)?;
        Ok(match found {
            Some(_) => Verdict::Consistent,
            None => Verdict::Refuted(Refutation::Certificate {
                oracle: self.name().into(),
                detail: format!("all {} assignments to {} atoms falsify the list", 1u64 << atoms.len(), atoms.len()),
            }),
        })
    }
}

/// Searches proofs in code order for one exhibiting a contradiction.
pub struct RefutationSearchOracle {
    pub theory: Arc<dyn EffectiveTheory>,
    pub code_budget: u128,
    pub step_budget: u64,
}

/// Some line of the proof is the negation of another.
pub fn exhibits_contradiction(proof: &Proof) -> bool {
    let lines: Vec<&Formula> = proof.formulas().collect();
    lines.iter().any(|f| matches!(f, Formula::Not(g) if lines.contains(&g.as_ref())))
}

impl ConsistencyOracle for RefutationSearchOracle {
    fn name(&self) -> &str {
        "search"
    }

    fn verdict(&self, base: &[Formula], candidate: &Formula) -> Result<Verdict, ReduceError> {
        let mut extra = base.to_vec();
        extra.push(candidate.clone());
        let theory = ExtendedTheory::new(self.theory.clone(), extra);
        let found = enumerate_proofs(&theory, self.code_budget, self.step_budget).find(|e| exhibits_contradiction(&e.proof));
        Ok(match found {
            Some(e) => Verdict::Refuted(Refutation::Proof(e.proof)),
            None => Verdict::Unknown { budget_spent: self.code_budget },
        })
    }
}

/// Parameters for building a registered oracle. The search oracle uses
/// `theory` (no axioms when absent) and both budgets.
#[derive(Clone)]
pub struct OracleParams {
    pub theory: Option<Arc<dyn EffectiveTheory>>,
    pub code_budget: u128,
    pub step_budget: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams { theory: None, code_budget: 6_000_000_000, step_budget: 1_000 }
    }
}

pub fn oracle_registry() -> Registry<OracleParams, dyn ConsistencyOracle> {
    let mut r: Registry<OracleParams, dyn ConsistencyOracle> = Registry::new("consistency oracle");
    r.register("truthtable", "exhaustive truth tables over atomic formulas", |_| {
        Ok(Box::new(TruthTableOracle::default()) as Box<dyn ConsistencyOracle>)
    })
    .expect("fresh registry");
    r.register("search", "proof search for a formula and its negation", |p| {
        let theory = match &p.theory {
            Some(t) => t.clone(),
            None => Arc::new(ToyTheory::new("pure", vec![]).expect("no axioms")) as Arc<dyn EffectiveTheory>,
        };
        Ok(Box::new(RefutationSearchOracle { theory, code_budget: p.code_budget, step_budget: p.step_budget })
            as Box<dyn ConsistencyOracle>)
    })
    .expect("fresh registry");
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;
    use crate::logic::syntax::{and, eq, or};
    use crate::logic::verify_proof;

    fn p(i: u32) -> Formula {
        eq(i, i)
    }

    #[test]
    fn empty_candidates() {
        let out = reduce(&[p(1)], &[], &TruthTableOracle::default()).unwrap();
        assert_eq!(out.formulas, [p(1)]);
        assert_eq!(out.provenance, [Provenance::FromBase]);
    }

    #[test]
    fn refuted_candidate_is_negated() {
        let out = reduce(&[p(1)], &[not(p(1)), p(2)], &TruthTableOracle::default()).unwrap();
        assert_eq!(out.formulas, [p(1), not(not(p(1))), p(2)]);
        assert!(matches!(out.provenance[1], Provenance::Negated(Refutation::Certificate { .. })));
        assert_eq!(out.provenance[2], Provenance::Kept);

        let contradiction = and(p(1), not(p(1)));
        let out = reduce(&[], &[contradiction.clone()], &TruthTableOracle::default()).unwrap();
        assert_eq!(out.formulas, [not(contradiction)]);
    }

    #[test]
    fn truth_table_verdicts() {
        let o = TruthTableOracle::default();
        let taut = or(p(1), not(p(1)));
        assert!(matches!(o.verdict(&[], &not(taut)).unwrap(), Verdict::Refuted(_)));
        assert_eq!(o.verdict(&[p(1)], &p(2)).unwrap(), Verdict::Consistent);
        let q = parse_formula("∀x x=x").unwrap();
        assert_eq!(o.verdict(&[], &q), Err(ReduceError::NonPropositional(q.clone())));
        assert_eq!(reduce(&[p(1), not(p(1))], &[], &o), Err(ReduceError::InconsistentBase));
    }

    #[test]
    fn search_oracle_finds_planted_contradiction() {
        let oracle = oracle_registry()
            .build("search", &OracleParams { code_budget: 6_000_000_000, ..Default::default() })
            .unwrap();
        let a = parse_formula("x∈x").unwrap();
        let Verdict::Refuted(Refutation::Proof(proof)) = oracle.verdict(&[a.clone()], &not(a.clone())).unwrap() else {
            panic!("expected a refutation");
        };
        assert!(exhibits_contradiction(&proof));
        let pure: Arc<dyn EffectiveTheory> = Arc::new(ToyTheory::new("pure", vec![]).unwrap());
        let extended = ExtendedTheory::new(pure, vec![a.clone(), not(a.clone())]);
        assert_eq!(verify_proof(&proof, &extended), Ok(()));

        let none = oracle_registry().build("search", &OracleParams { code_budget: 0, ..Default::default() }).unwrap();
        assert_eq!(none.verdict(&[a.clone()], &not(a)).unwrap(), Verdict::Unknown { budget_spent: 0 });
    }
}

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::parse::parse_formula;
use super::syntax::{proof_alphabet, write_var, Formula, Var, LINE_SEPARATOR};
use super::theory::{EffectiveTheory, Recognition};
use crate::codec;

/// Logical axiom schemas of the Hilbert system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalAxiom {
    /// `φ → (ψ → φ)`
    Weakening,
    /// `(φ → (ψ → χ)) → ((φ → ψ) → (φ → χ))`
    Distribution,
    /// `(¬φ → ¬ψ) → (ψ → φ)`
    Contraposition,
    AndElimLeft,
    AndElimRight,
    AndIntro,
    OrIntroLeft,
    OrIntroRight,
    /// `(φ → χ) → ((ψ → χ) → ((φ ∨ ψ) → χ))`
    OrElim,
    /// `∀vφ → φ[u/v]` with `u` free for `v`
    Instantiation,
    /// `∀v(φ → ψ) → (φ → ∀vψ)` with `v` not free in `φ`
    ForallOverImplies,
    /// `φ → ∀vφ` with `v` not free in `φ`
    VacuousForall,
    /// `∃vφ → ¬∀v¬φ`
    ExistsToForall,
    /// `¬∀v¬φ → ∃vφ`
    ForallToExists,
    /// `v = v`
    Reflexivity,
    /// `u = v → (α → β)` for atomic `α`, with `β` replacing some `u` in `α` by `v`
    Substitution,
}

/// Which logical schema `f` instantiates, if any.
pub fn logical_axiom(f: &Formula) -> Option<LogicalAxiom> {
    use Formula::*;
    use LogicalAxiom as L;
    match f {
        &Eq(a, b) if a == b => return Some(L::Reflexivity),
        Implies(lhs, rhs) => {
            let (lhs, rhs) = (lhs.as_ref(), rhs.as_ref());
            if let Implies(b, a2) = rhs {
                if a2.as_ref() == lhs {
                    return Some(L::Weakening);
                }
                if let And(a3, b3) = a2.as_ref() {
                    if a3.as_ref() == lhs && b3 == b {
                        return Some(L::AndIntro);
                    }
                }
            }
            if let (Implies(a, bc), Implies(ab, ac)) = (lhs, rhs) {
                if let (Implies(b, c), Implies(a2, b2), Implies(a3, c2)) = (bc.as_ref(), ab.as_ref(), ac.as_ref()) {
                    if a == a2 && a == a3 && b == b2 && c == c2 {
                        return Some(L::Distribution);
                    }
                }
            }
            if let (Implies(na, nb), Implies(b2, a2)) = (lhs, rhs) {
                if let (Not(a), Not(b)) = (na.as_ref(), nb.as_ref()) {
                    if a == a2 && b == b2 {
                        return Some(L::Contraposition);
                    }
                }
            }
            if let And(a, b) = lhs {
                if a.as_ref() == rhs {
                    return Some(L::AndElimLeft);
                }
                if b.as_ref() == rhs {
                    return Some(L::AndElimRight);
                }
            }
            if let Or(a, b) = rhs {
                if a.as_ref() == lhs {
                    return Some(L::OrIntroLeft);
                }
                if b.as_ref() == lhs {
                    return Some(L::OrIntroRight);
                }
            }
            if let (Implies(a, c), Implies(bc, rest)) = (lhs, rhs) {
                if let (Implies(b, c2), Implies(ab, c3)) = (bc.as_ref(), rest.as_ref()) {
                    if let Or(a2, b2) = ab.as_ref() {
                        if a == a2 && b == b2 && c == c2 && c == c3 {
                            return Some(L::OrElim);
                        }
                    }
                }
            }
            if let Forall(v, phi) = lhs {
                if is_instance(phi, *v, rhs) {
                    return Some(L::Instantiation);
                }
                if let (Implies(a, b), Implies(a2, all_b)) = (phi.as_ref(), rhs) {
                    if let Forall(v2, b2) = all_b.as_ref() {
                        if a == a2 && v == v2 && b == b2 && !a.is_free(*v) {
                            return Some(L::ForallOverImplies);
                        }
                    }
                }
            }
            if let Forall(v, a2) = rhs {
                if a2.as_ref() == lhs && !lhs.is_free(*v) {
                    return Some(L::VacuousForall);
                }
            }
            if let (Exists(v, a), Not(inner)) = (lhs, rhs) {
                if let Forall(v2, na) = inner.as_ref() {
                    if v == v2 && na.as_ref() == &Not(a.clone()) {
                        return Some(L::ExistsToForall);
                    }
                }
            }
            if let (Not(inner), Exists(v2, a2)) = (lhs, rhs) {
                if let Forall(v, na) = inner.as_ref() {
                    if v == v2 && na.as_ref() == &Not(a2.clone()) {
                        return Some(L::ForallToExists);
                    }
                }
            }
            if let (&Eq(u, v), Implies(alpha, beta)) = (lhs, rhs) {
                if substitutes(u, v, alpha, beta) {
                    return Some(L::Substitution);
                }
            }
        }
        _ => {}
    }
    None
}

/// `inst` is `phi[u/v]` for some variable `u` free for `v` in `phi`.
fn is_instance(phi: &Formula, v: Var, inst: &Formula) -> bool {
    inst.vars()
        .into_iter()
        .chain([v])
        .any(|u| phi.free_for(u, v) && &phi.subst(v, u) == inst)
}

fn substitutes(u: Var, v: Var, alpha: &Formula, beta: &Formula) -> bool {
    let ok = |a: Var, b: Var| a == b || (a == u && b == v);
    match (alpha, beta) {
        (&Formula::Eq(a1, a2), &Formula::Eq(b1, b2)) | (&Formula::In(a1, a2), &Formula::In(b1, b2)) => {
            ok(a1, b1) && ok(a2, b2)
        }
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomSource {
    Theory,
    Logic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Justification {
    Axiom(AxiomSource),
    /// From line `i` (`φ`) and line `j` (`φ → ψ`).
    ModusPonens(usize, usize),
    /// `∀v φ` from line `i` (`φ`).
    Generalization(usize, Var),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(AxiomSource::Theory) => f.write_str("axiom"),
            Justification::Axiom(AxiomSource::Logic) => f.write_str("logic"),
            Justification::ModusPonens(i, j) => write!(f, "mp {i} {j}"),
            Justification::Generalization(i, v) => {
                write!(f, "gen {i} ")?;
                write_var(f, *v)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ProofError {
    pub line: usize,
    pub reason: String,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.lines.iter().map(|l| &l.formula)
    }

    /// Formulas joined by `;`: the text whose code is the proof's code.
    pub fn to_code_text(&self) -> String {
        self.formulas().map(Formula::to_string).collect::<Vec<_>>().join(&LINE_SEPARATOR.to_string())
    }

    pub fn code(&self) -> BigUint {
        codec::encode(&self.to_code_text(), proof_alphabet()).expect("printed proofs use the proof alphabet")
    }

    /// One line per step: `formula ⊢ justification`.
    pub fn to_text(&self) -> String {
        self.lines.iter().map(|l| format!("{} ⊢ {}\n", l.formula, l.justification)).collect()
    }

    /// Inverse of [`Proof::to_text`]. `by` is accepted in place of `⊢`.
    /// Lines without a justification get an inferred one; blank lines and
    /// `#` comments are skipped.
    pub fn parse_text(text: &str, theory: &dyn EffectiveTheory) -> Result<Proof, ProofError> {
        let mut lines = Vec::new();
        let mut pending = Vec::new();
        for raw in text.lines() {
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let line = lines.len();
            let err = |reason: String| ProofError { line, reason };
            let (formula, just) = match raw.rsplit_once(" ⊢ ").or_else(|| raw.rsplit_once(" by ")) {
                Some((f, j)) => (f, Some(j.trim())),
                None => (raw, None),
            };
            let formula = parse_formula(formula).map_err(|e| err(e.to_string()))?;
            let justification = match just {
                Some(j) => parse_justification(j).map_err(err)?,
                None => {
                    pending.push(line);
                    Justification::Axiom(AxiomSource::Theory)
                }
            };
            lines.push(ProofLine { formula, justification });
        }
        for line in pending {
            let earlier: Vec<&Formula> = lines[..line].iter().map(|l| &l.formula).collect();
            lines[line].justification = infer_line(&earlier, &lines[line].formula, theory, theory.declared_budget())
                .ok_or(ProofError { line, reason: "no justification applies".into() })?;
        }
        Ok(Proof { lines })
    }
}

fn parse_justification(s: &str) -> Result<Justification, String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let idx = |t: &str| t.parse::<usize>().map_err(|_| format!("bad line number {t:?}"));
    match parts.as_slice() {
        ["axiom"] => Ok(Justification::Axiom(AxiomSource::Theory)),
        ["logic"] => Ok(Justification::Axiom(AxiomSource::Logic)),
        ["mp", i, j] => Ok(Justification::ModusPonens(idx(i)?, idx(j)?)),
        ["gen", i, v] => {
            let var = match parse_formula(&format!("{v}={v}")) {
                Ok(Formula::Eq(a, _)) => a,
                _ => return Err(format!("bad variable {v:?}")),
            };
            Ok(Justification::Generalization(idx(i)?, var))
        }
        _ => Err(format!("unknown justification {s:?}")),
    }
}

/// Check every line against its justification. Theory axioms are checked
/// with the theory's recognizer under `step_budget`.
pub fn verify_proof_with_budget(proof: &Proof, theory: &dyn EffectiveTheory, step_budget: u64) -> Result<(), ProofError> {
    if proof.lines.is_empty() {
        return Err(ProofError { line: 0, reason: "empty proof".into() });
    }
    for (n, line) in proof.lines.iter().enumerate() {
        let err = |reason: &str| Err(ProofError { line: n, reason: reason.to_string() });
        let earlier = |i: usize| if i < n { Some(&proof.lines[i].formula) } else { None };
        let f = &line.formula;
        match line.justification {
            Justification::Axiom(AxiomSource::Theory) => match theory.recognize(f, step_budget) {
                Recognition::Axiom => {}
                Recognition::NotAxiom => return err("not an axiom of the theory"),
                Recognition::OutOfBudget => return err("axiom recognizer ran out of steps"),
            },
            Justification::Axiom(AxiomSource::Logic) => {
                if logical_axiom(f).is_none() {
                    return err("not a logical axiom");
                }
            }
            Justification::ModusPonens(i, j) => match (earlier(i), earlier(j)) {
                (Some(a), Some(Formula::Implies(a2, b))) if a == a2.as_ref() && b.as_ref() == f => {}
                (Some(_), Some(_)) => return err("modus ponens does not match"),
                _ => return err("modus ponens cites a later line"),
            },
            Justification::Generalization(i, v) => match (earlier(i), f) {
                (Some(g), Formula::Forall(v2, body)) if *v2 == v && body.as_ref() == g => {}
                (Some(_), _) => return err("generalization does not match"),
                _ => return err("generalization cites a later line"),
            },
        }
    }
    Ok(())
}

pub fn verify_proof(proof: &Proof, theory: &dyn EffectiveTheory) -> Result<(), ProofError> {
    verify_proof_with_budget(proof, theory, theory.declared_budget())
}

fn infer_line(earlier: &[&Formula], f: &Formula, theory: &dyn EffectiveTheory, budget: u64) -> Option<Justification> {
    if theory.recognize(f, budget) == Recognition::Axiom {
        return Some(Justification::Axiom(AxiomSource::Theory));
    }
    if logical_axiom(f).is_some() {
        return Some(Justification::Axiom(AxiomSource::Logic));
    }
    for (j, g) in earlier.iter().enumerate() {
        if let Formula::Implies(a, b) = g {
            if b.as_ref() == f {
                if let Some(i) = earlier.iter().position(|h| *h == a.as_ref()) {
                    return Some(Justification::ModusPonens(i, j));
                }
            }
        }
    }
    if let Formula::Forall(v, body) = f {
        if let Some(i) = earlier.iter().position(|h| *h == body.as_ref()) {
            return Some(Justification::Generalization(i, *v));
        }
    }
    None
}

/// Reconstruct a proof from its formulas alone, or `None` if some line has no justification.
pub fn infer_justifications(formulas: &[Formula], theory: &dyn EffectiveTheory, step_budget: u64) -> Option<Proof> {
    if formulas.is_empty() {
        return None;
    }
    let mut lines = Vec::with_capacity(formulas.len());
    for (n, f) in formulas.iter().enumerate() {
        let earlier: Vec<&Formula> = formulas[..n].iter().collect();
        let justification = infer_line(&earlier, f, theory, step_budget)?;
        lines.push(ProofLine { formula: f.clone(), justification });
    }
    Some(Proof { lines })
}

/// Formulas of a `;`-separated text, provided every segment is in printed form.
pub fn canonical_lines(text: &str) -> Option<Vec<Formula>> {
    text.split(LINE_SEPARATOR)
        .map(|seg| parse_formula(seg).ok().filter(|f| f.to_string() == seg))
        .collect()
}

/// The proof whose code is `code`, if that code names one.
pub fn decode_proof(code: &BigUint, theory: &dyn EffectiveTheory, step_budget: u64) -> Option<Proof> {
    let text = codec::decode(code, proof_alphabet());
    infer_justifications(&canonical_lines(&text)?, theory, step_budget)
}

//! Proofs in order of their codes.
//!
//! Strings of each length are generated by depth-first search over prefixes
//! that a pushdown recogniser for printed proofs can still complete. A prefix
//! is abandoned when the shortest completion no longer fits the length, or
//! when the smallest code it could reach exceeds the budget. Leaves are
//! sorted by code, so the overall stream is in code order.

use num_bigint::BigUint;

use super::proof::{canonical_lines, infer_justifications, Proof};
use super::syntax::proof_alphabet;
use super::theory::EffectiveTheory;
use crate::codec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Need {
    Formula,
    /// `x` starting a variable
    Var,
    /// right after `x`: optional index, no leading zero
    VarIndex,
    /// further index digits
    Digits,
    Rel,
    Connective,
    Close,
    Number,
    Comma,
    /// `;` followed by another formula, or nothing
    MoreLines,
}

impl Need {
    fn min_len(self) -> usize {
        match self {
            Need::Formula => 3,
            Need::Var | Need::Rel | Need::Connective | Need::Close | Need::Number | Need::Comma => 1,
            Need::VarIndex | Need::Digits | Need::MoreLines => 0,
        }
    }
    fn nullable(self) -> bool {
        self.min_len() == 0
    }
}

/// Pushdown recogniser for `;`-joined printed formulas. The stack top is
/// the last element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofPda {
    stack: Vec<Need>,
}

impl Default for ProofPda {
    fn default() -> Self {
        ProofPda { stack: vec![Need::MoreLines, Need::Formula] }
    }
}

impl ProofPda {
    /// Consume one symbol; false means no completion exists any more.
    pub fn feed(&mut self, c: char) -> bool {
        use Need::*;
        while let Some(top) = self.stack.pop() {
            let pushed: &[Need] = match (top, c) {
                (Formula, 'x') => &[Var, Rel, VarIndex],
                (Formula, '¬') => &[Formula],
                (Formula, '(') => &[Close, Formula, Connective, Formula],
                (Formula, '∀' | '∃') => &[Formula, Var],
                (Formula, 'K') => &[Number, Comma, Number],
                (Var, 'x') => &[VarIndex],
                (VarIndex, '1'..='9') | (Digits, '0'..='9') => &[Digits],
                (Number, '0') => &[],
                (Number, '1'..='9') => &[Digits],
                (Rel, '=' | '∈') | (Connective, '∧' | '∨' | '→') | (Close, ')') | (Comma, ',') => &[],
                (MoreLines, ';') => &[MoreLines, Formula],
                (VarIndex | Digits, _) => continue,
                _ => return false,
            };
            self.stack.extend_from_slice(pushed);
            return true;
        }
        false
    }

    pub fn is_complete(&self) -> bool {
        self.stack.iter().all(|n| n.nullable())
    }

    /// Fewest further symbols needed to reach a complete string.
    pub fn min_completion(&self) -> usize {
        self.stack.iter().map(|n| n.min_len()).sum()
    }
}

/// Whether `text` is a sequence of printed formulas joined by `;`.
pub fn is_printed_proof_text(text: &str) -> bool {
    let mut pda = ProofPda::default();
    text.chars().all(|c| pda.feed(c)) && pda.is_complete()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedProof {
    pub code: u128,
    pub proof: Proof,
}

/// Iterator over every proof of `theory` with code at most `code_budget`,
/// in increasing code order.
pub struct ProofEnumerator<'a> {
    theory: &'a dyn EffectiveTheory,
    code_budget: u128,
    step_budget: u64,
    length: usize,
    max_length: usize,
    batch: std::vec::IntoIter<EnumeratedProof>,
}

pub fn enumerate_proofs(theory: &dyn EffectiveTheory, code_budget: u128, step_budget: u64) -> ProofEnumerator<'_> {
    let alphabet = proof_alphabet();
    let mut max_length = 0;
    while codec::first_code_of_length(max_length + 1, alphabet) <= BigUint::from(code_budget) {
        max_length += 1;
    }
    ProofEnumerator { theory, code_budget, step_budget, length: 0, max_length, batch: Vec::new().into_iter() }
}

impl Iterator for ProofEnumerator<'_> {
    type Item = EnumeratedProof;

    fn next(&mut self) -> Option<EnumeratedProof> {
        loop {
            if let Some(p) = self.batch.next() {
                return Some(p);
            }
            if self.length >= self.max_length {
                return None;
            }
            self.length += 1;
            let mut found = Vec::new();
            texts_of_length(self.length, self.code_budget, &mut |code, text| {
                if let Some(lines) = canonical_lines(text) {
                    if let Some(proof) = infer_justifications(&lines, self.theory, self.step_budget) {
                        found.push(EnumeratedProof { code, proof });
                    }
                }
            });
            found.sort_by_key(|p| p.code);
            self.batch = found.into_iter();
        }
    }
}

/// Visit every printed-proof text of exactly `len` symbols whose code is at most `budget`.
pub fn texts_of_length(len: usize, budget: u128, visit: &mut dyn FnMut(u128, &str)) {
    let alphabet = proof_alphabet();
    let base = alphabet.base() as u128;
    // ones[i] = 1 + B + ... + B^(i-1): the cheapest way to fill i positions
    // starting at place value 1; shifted by the place value of the cursor.
    let mut place = Vec::with_capacity(len + 1);
    let mut p: u128 = 1;
    for _ in 0..=len {
        place.push(p);
        p = p.saturating_mul(base);
    }
    let fill = |from: usize| -> u128 {
        (from..len).fold(0u128, |acc, i| acc.saturating_add(place[i]))
    };
    let symbols: Vec<(char, u128)> = alphabet.symbols().iter().map(|&c| (c, alphabet.number(c).unwrap() as u128)).collect();
    let mut text = String::new();
    dfs(0, len, 0, &ProofPda::default(), &mut text, &symbols, &place, &fill, budget, visit);
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    pos: usize,
    len: usize,
    code: u128,
    pda: &ProofPda,
    text: &mut String,
    symbols: &[(char, u128)],
    place: &[u128],
    fill: &dyn Fn(usize) -> u128,
    budget: u128,
    visit: &mut dyn FnMut(u128, &str),
) {
    if pos == len {
        if pda.is_complete() {
            visit(code, text);
        }
        return;
    }
    for &(c, digit) in symbols {
        let code2 = code.saturating_add(digit.saturating_mul(place[pos]));
        if code2.saturating_add(fill(pos + 1)) > budget {
            // larger digits at this place only cost more
            break;
        }
        let mut next = pda.clone();
        if !next.feed(c) || next.min_completion() > len - pos - 1 {
            continue;
        }
        text.push(c);
        dfs(pos + 1, len, code2, &next, text, symbols, place, fill, budget, visit);
        text.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse::parse_formula;

    #[test]
    fn pda_accepts_exactly_printed_forms() {
        for s in ["x=x", "x10∈x2", "¬∀x∃x1(x∈x1→K0,12)", "x=x;¬x=x"] {
            assert!(is_printed_proof_text(s), "{s}");
        }
        for s in ["", "x0=x", "(x=x)", "K01,1", "x=x;", ";x=x", "x=x1)", "x=", "x==x"] {
            assert!(!is_printed_proof_text(s), "{s}");
        }
    }

    #[test]
    fn pda_agrees_with_parser_on_short_strings() {
        let alphabet = proof_alphabet();
        for code in 0u128..60_000 {
            let text = codec::decode_u128(code, alphabet);
            let by_parser = canonical_lines(&text).is_some();
            assert_eq!(is_printed_proof_text(&text), by_parser, "{text:?}");
        }
    }

    #[test]
    fn min_completion_is_tight() {
        let mut pda = ProofPda::default();
        for c in "∀x(".chars() {
            assert!(pda.feed(c));
        }
        // "x=x∧x=x)" is the shortest way out
        assert_eq!(pda.min_completion(), 8);
        assert!(parse_formula("∀x(x=x∧x=x)").is_ok());
    }
}

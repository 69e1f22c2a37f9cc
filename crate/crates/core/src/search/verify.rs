use serde::{Deserialize, Serialize};

use super::{dovetail, SearchConfig, SearchError, SearchOutcome};
use crate::knowledge_table::ceil_log2;
use crate::machine::{self, Instruction, Program, RunOutcome};
use crate::registry::Registry;

/// `⟨tag, y⟩` with the tag in the low bit.
pub fn encode_pair(tag: bool, y: u64) -> u64 {
    (y << 1) | tag as u64
}

pub fn decode_pair(v: u64) -> (bool, u64) {
    (v & 1 == 1, v >> 1)
}

/// Positive and negative verifiers for a language in NP ∩ co-NP.
///
/// Both take `n` in `R1` and a candidate certificate `y` in `R2` and accept
/// by halting with a nonzero `R0`. Certificates are bounded by `s·n^k + t`
/// and verifier runs by `s·⌈log2(n+1)⌉^k + t` steps; a run that exceeds the
/// time bound is stopped and counts as a rejection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierPair {
    pub m1: Program,
    pub m2: Program,
    pub s: u64,
    pub k: u32,
    pub t: u64,
}

impl VerifierPair {
    pub fn size_bound(&self, n: u64) -> u128 {
        (self.s as u128).saturating_mul((n as u128).saturating_pow(self.k)).saturating_add(self.t as u128)
    }

    pub fn time_bound(&self, n: u64) -> u64 {
        let log = ceil_log2(n as u128 + 1) as u64;
        self.s.saturating_mul(log.saturating_pow(self.k)).saturating_add(self.t)
    }

    fn accepts(&self, m: &Program, n: u64, y: u64) -> bool {
        matches!(machine::run(m, &[n, y], self.time_bound(n)), RunOutcome::Halted { output, .. } if output != 0)
    }

    /// `y` is a certificate of membership of `n`.
    pub fn positive(&self, n: u64, y: u64) -> bool {
        y as u128 <= self.size_bound(n) && self.accepts(&self.m1, n, y)
    }

    /// `y` is a certificate of non-membership of `n`.
    pub fn negative(&self, n: u64, y: u64) -> bool {
        y as u128 <= self.size_bound(n) && self.accepts(&self.m2, n, y)
    }

    /// Least certificate by exhaustive search, as an encoded pair.
    pub fn witness_by_search(&self, n: u64) -> Option<u64> {
        let top = u64::try_from(self.size_bound(n)).unwrap_or(u64::MAX >> 1);
        (0..=top).find_map(|y| {
            if self.positive(n, y) {
                Some(encode_pair(true, y))
            } else if self.negative(n, y) {
                Some(encode_pair(false, y))
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    In { certificate: u64 },
    Out { certificate: u64 },
}

/// Machine T: dovetail for a program printing a verified certificate pair.
pub fn decide_membership(
    n: u64,
    vp: &VerifierPair,
    config: &SearchConfig,
) -> Result<SearchOutcome<Membership>, SearchError> {
    dovetail(config, &[n], |h| {
        let (tag, y) = decode_pair(h.output);
        if tag && vp.positive(n, y) {
            Some(Membership::In { certificate: y })
        } else if !tag && vp.negative(n, y) {
            Some(Membership::Out { certificate: y })
        } else {
            None
        }
    })
}

/// A language given by its verifier pair.
pub trait Language: Send + Sync {
    fn name(&self) -> &str;
    fn verifiers(&self) -> &VerifierPair;
    /// Encoded certificate pair for `n`, the value a planted table should print.
    fn witness(&self, n: u64) -> Option<u64> {
        self.verifiers().witness_by_search(n)
    }
}

/// Even numbers: `2y = n` certifies membership, `2y + 1 = n` non-membership.
#[derive(Debug, Clone)]
pub struct Parity {
    vp: VerifierPair,
}

impl Default for Parity {
    fn default() -> Self {
        use Instruction::*;
        let m1 = Program::new(vec![Add(3, 2, 2), Monus(4, 3, 1), Monus(5, 1, 3), Add(4, 4, 5), Jz(4, 6), Halt, Const(0, 1), Halt]);
        let m2 = Program::new(vec![
            Add(3, 2, 2),
            Const(6, 1),
            Add(3, 3, 6),
            Monus(4, 3, 1),
            Monus(5, 1, 3),
            Add(4, 4, 5),
            Jz(4, 8),
            Halt,
            Const(0, 1),
            Halt,
        ]);
        Parity { vp: VerifierPair { m1, m2, s: 1, k: 1, t: 10 } }
    }
}

impl Language for Parity {
    fn name(&self) -> &str {
        "parity"
    }
    fn verifiers(&self) -> &VerifierPair {
        &self.vp
    }
    fn witness(&self, n: u64) -> Option<u64> {
        Some(encode_pair(n % 2 == 0, n / 2))
    }
}

/// Verifiers read from JSON: `{"name", "m1", "m2", "s", "k", "t"}` with the
/// programs in assembly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifierFile {
    pub name: String,
    pub m1: String,
    pub m2: String,
    pub s: u64,
    pub k: u32,
    pub t: u64,
}

#[derive(Debug, Clone)]
pub struct FileLanguage {
    name: String,
    vp: VerifierPair,
}

impl FileLanguage {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let f: VerifierFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let m1 = Program::from_assembly(&f.m1).map_err(|e| format!("m1: {e}"))?;
        let m2 = Program::from_assembly(&f.m2).map_err(|e| format!("m2: {e}"))?;
        Ok(FileLanguage { name: f.name, vp: VerifierPair { m1, m2, s: f.s, k: f.k, t: f.t } })
    }
}

impl Language for FileLanguage {
    fn name(&self) -> &str {
        &self.name
    }
    fn verifiers(&self) -> &VerifierPair {
        &self.vp
    }
}

#[derive(Debug, Clone, Default)]
pub struct LanguageParams {
    pub source: Option<String>,
}

pub fn language_registry() -> Registry<LanguageParams, dyn Language> {
    let mut r: Registry<LanguageParams, dyn Language> = Registry::new("language");
    r.register("parity", "even numbers, certificates n/2 and (n-1)/2", |_| {
        Ok(Box::new(Parity::default()) as Box<dyn Language>)
    })
    .expect("fresh registry");
    r.register("file", "verifier pair from JSON {name, m1, m2, s, k, t}", |p| {
        let text = p.source.as_deref().ok_or("the file language needs a verifier file")?;
        Ok(Box::new(FileLanguage::from_json(text)?) as Box<dyn Language>)
    })
    .expect("fresh registry");
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge_table::build_table;
    use crate::search::SearchStatus;

    #[test]
    fn parity_verifiers() {
        let p = Parity::default();
        let vp = p.verifiers();
        assert!(vp.positive(6, 3) && !vp.positive(6, 2) && !vp.negative(6, 3));
        assert!(vp.negative(7, 3) && !vp.positive(7, 3));
        for n in 0..200 {
            assert_eq!(vp.witness_by_search(n), p.witness(n), "n={n}");
        }
    }

    #[test]
    fn machine_t_on_parity() {
        let lang = Parity::default();
        let table = build_table(&(0..64).map(|n| lang.witness(n).unwrap()).collect::<Vec<_>>()).unwrap();
        let config = SearchConfig { z_bound: 16, round_budget: 200, ..Default::default() }.plant(
            9,
            table.compile().program,
            1,
            "parity witness table",
        );
        let out = decide_membership(6, lang.verifiers(), &config).unwrap();
        assert!(matches!(out.status, SearchStatus::Found { detail: Membership::In { certificate: 3 }, .. }));
        let out = decide_membership(7, lang.verifiers(), &config).unwrap();
        assert!(matches!(out.status, SearchStatus::Found { detail: Membership::Out { certificate: 3 }, .. }));

        let bare = SearchConfig { z_bound: 1, round_budget: 2, ..Default::default() };
        let out = decide_membership(7, lang.verifiers(), &bare).unwrap();
        assert!(matches!(out.status, SearchStatus::Exhausted { .. }));
    }

    #[test]
    fn file_language() {
        let json = r#"{"name":"even","m1":"ADD R3 R2 R2\nMONUS R4 R3 R1\nMONUS R5 R1 R3\nADD R4 R4 R5\nJZ R4 6\nHALT\nCONST R0 1\nHALT","m2":"HALT","s":1,"k":1,"t":10}"#;
        let r = language_registry();
        let lang = r.build("file", &LanguageParams { source: Some(json.into()) }).unwrap();
        assert_eq!(lang.name(), "even");
        assert_eq!(lang.witness(8), Some(encode_pair(true, 4)));
        assert_eq!(lang.witness(9), None);
        assert!(r.build("file", &LanguageParams::default()).is_err());
    }
}

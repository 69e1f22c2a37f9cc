use serde::{Deserialize, Serialize};

use super::verify::{Language, Parity};
use super::{dovetail, minimal_divisor, SearchConfig, SearchError, SearchStatus};
use crate::knowledge_table::{ceil_log2, KnowledgeTable, TableError};
use crate::registry::Registry;

/// A total function `n -> k` whose knowledge is being checked.
pub trait KnowledgeFunction: Send + Sync {
    fn name(&self) -> &str;
    fn value(&self, n: u64) -> u64;
}

/// Wraps a closure as a [`KnowledgeFunction`].
pub struct FnKnowledge<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(u64) -> u64 + Send + Sync> KnowledgeFunction for FnKnowledge<F> {
    fn name(&self) -> &str {
        &self.name
    }
    fn value(&self, n: u64) -> u64 {
        (self.f)(n)
    }
}

fn boxed(name: &str, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Box<dyn KnowledgeFunction> {
    Box::new(FnKnowledge { name: name.to_string(), f })
}

pub fn knowledge_registry() -> Registry<(), dyn KnowledgeFunction> {
    let mut r: Registry<(), dyn KnowledgeFunction> = Registry::new("knowledge function");
    r.register("mindiv", "least divisor above 1; 0 for n < 2", |_| {
        Ok(boxed("mindiv", |n| minimal_divisor(n).unwrap_or(0)))
    })
    .expect("fresh registry");
    r.register("parity-witness", "encoded certificate pair of the parity language", |_| {
        let lang = Parity::default();
        Ok(boxed("parity-witness", move |n| lang.witness(n).expect("parity certificates always exist")))
    })
    .expect("fresh registry");
    r.register("zero", "the constant 0", |_| Ok(boxed("zero", |_| 0))).expect("fresh registry");
    r
}

/// Knowledge table of `f` over `n < count`.
pub fn table_of(f: &dyn KnowledgeFunction, count: u64) -> Result<KnowledgeTable, TableError> {
    KnowledgeTable::build(&(0..count).map(|n| f.value(n)).collect::<Vec<_>>())
}

/// `⌈log2(n+1) + log2(k+1) + c⌉` for integer `c`.
pub fn exact_time(n: u64, k: u64, c: u64) -> u64 {
    ceil_log2((n as u128 + 1) * (k as u128 + 1)) as u64 + c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeRecord {
    pub n: u64,
    pub k: u64,
    pub program_index: Option<u64>,
    pub c: Option<u64>,
    pub steps: Option<u64>,
    pub exact_time_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeReport {
    pub function: String,
    pub domain_bound: u64,
    pub records: Vec<KnowledgeRecord>,
    pub holds: bool,
    /// The finite domain on which `holds` was checked.
    pub verified_domain: String,
    /// Where the successful programs came from.
    pub provenance: Vec<String>,
}

/// For each `n < domain_bound`, search for a program printing `f(n)` whose
/// standalone runtime is exactly `⌈log2(n+1) + log2(k+1) + c_y⌉`.
///
/// Success on the tested domain says nothing about larger `n`; the report
/// names the domain and the planted programs explicitly.
pub fn check_knowledge(
    f: &dyn KnowledgeFunction,
    config: &SearchConfig,
    domain_bound: u64,
) -> Result<KnowledgeReport, SearchError> {
    let mut records = Vec::with_capacity(domain_bound as usize);
    for n in 0..domain_bound {
        let k = f.value(n);
        let out = dovetail(config, &[n], |h| {
            (h.output == k && h.steps == exact_time(n, k, config.c_of(h.index))).then_some(h.steps)
        })?;
        records.push(match out.status {
            SearchStatus::Found { program_index, detail: steps, .. } => KnowledgeRecord {
                n,
                k,
                program_index: Some(program_index),
                c: Some(config.c_of(program_index)),
                steps: Some(steps),
                exact_time_ok: true,
            },
            SearchStatus::Exhausted { .. } => {
                KnowledgeRecord { n, k, program_index: None, c: None, steps: None, exact_time_ok: false }
            }
        });
    }
    let holds = records.iter().all(|r| r.exact_time_ok);
    let mut provenance = config.provenance();
    if provenance.is_empty() {
        provenance.push("no planted programs; only decoded program indices were searched".into());
    }
    Ok(KnowledgeReport {
        function: f.name().to_string(),
        domain_bound,
        records,
        holds,
        verified_domain: format!("n < {domain_bound} only; the claim for all n is not finitely checkable"),
        provenance,
    })
}

use anyhow::{Context, Result};
use serde_json::{json, Value};
use workbench_core::search::{
    check_knowledge, decide_membership, factorize, iteration_bound, knowledge_registry, language_registry,
    LanguageParams, Membership, SearchConfig, SearchError, SearchStatus, SplitSource,
};

use crate::cli::{SearchArgs, SearchCommand};
use crate::config::WorkbenchConfig;
use crate::report::{inputs, RunReport};
use crate::{Output, UsageError};

fn search_config(config: &WorkbenchConfig, args: &SearchArgs) -> Result<SearchConfig> {
    if args.workers == 0 {
        anyhow::bail!(UsageError("--workers must be at least 1".into()));
    }
    config.search_config(args.z, args.rounds, &args.plant, args.workers)
}

fn search_inputs(n: u64, config: &SearchConfig, extra: [(&str, Value); 1]) -> Value {
    let [(k, v)] = extra;
    inputs([
        ("n", json!(n)),
        ("z", json!(config.z_bound)),
        ("rounds", json!(config.round_budget)),
        ("workers", json!(config.workers)),
        ("planted", json!(config.provenance())),
        (k, v),
    ])
}

pub fn search(config: &WorkbenchConfig, cmd: &SearchCommand) -> Result<Output> {
    match cmd {
        SearchCommand::Factor { n, fallback, search } => factor(config, *n, *fallback, search),
        SearchCommand::Decide { n, verifier, verifier_file, search } => {
            let source = match verifier_file {
                Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
                None => None,
            };
            let registry = language_registry();
            if !registry.contains(verifier) {
                anyhow::bail!(UsageError(format!("unknown verifier {verifier:?}; known: {}", registry.names().join(", "))));
            }
            let lang = registry.build(verifier, &LanguageParams { source })?;
            let sc = search_config(config, search)?;
            let out = decide_membership(*n, lang.verifiers(), &sc)?;
            let ins = search_inputs(*n, &sc, [("verifier", json!(lang.name()))]);
            let report = match out.status {
                SearchStatus::Found { witness, program_index, rounds, detail, .. } => {
                    let (status, certificate) = match detail {
                        Membership::In { certificate } => ("in", certificate),
                        Membership::Out { certificate } => ("out", certificate),
                    };
                    let bound = iteration_bound(*n, witness, &sc);
                    RunReport::new(
                        "search decide",
                        ins,
                        json!({
                            "status": status,
                            "witness": witness,
                            "certificate": certificate,
                            "program_index": program_index,
                            "rounds": rounds,
                            "bound": bound.to_string(),
                            "within_bound": rounds as u128 <= bound,
                        }),
                    )
                    .rounds_against(Some(rounds), Some(bound))
                }
                SearchStatus::Exhausted { rounds } => RunReport::new(
                    "search decide",
                    ins,
                    json!({ "status": "exhausted", "witness": null, "program_index": null, "rounds": rounds, "bound": null, "within_bound": null }),
                )
                .rounds_against(Some(rounds), None)
                .warn("no verified certificate within the round budget; plant a witness table to decide"),
            };
            Ok(report.into())
        }
        SearchCommand::CheckKnowledge { function, domain, search } => {
            let registry = knowledge_registry();
            if !registry.contains(function) {
                anyhow::bail!(UsageError(format!("unknown function {function:?}; known: {}", registry.names().join(", "))));
            }
            let f = registry.build(function, &())?;
            let sc = search_config(config, search)?;
            let report = check_knowledge(f.as_ref(), &sc, *domain)?;
            let failures: Vec<u64> = report.records.iter().filter(|r| !r.exact_time_ok).map(|r| r.n).collect();
            let mut out = RunReport::new(
                "search check-knowledge",
                search_inputs(*domain, &sc, [("fn", json!(function))]),
                json!({
                    "status": if report.holds { "holds" } else { "fails" },
                    "holds": report.holds,
                    "verified_domain": report.verified_domain,
                    "provenance": report.provenance,
                    "failures": failures,
                    "records": report.records,
                }),
            )
            .warn(format!("verified on {}", report.verified_domain));
            if !report.holds {
                out = out.warn(format!("{} inputs without an exact-time program", failures.len()));
            }
            Ok(out.into())
        }
    }
}

fn factor(config: &WorkbenchConfig, n: u64, fallback: bool, args: &SearchArgs) -> Result<Output> {
    let sc = search_config(config, args)?;
    let ins = search_inputs(n, &sc, [("fallback", json!(fallback))]);
    let f = match factorize(n, &sc, fallback) {
        Ok(f) => f,
        Err(SearchError::Exhausted { rounds }) => {
            let report = RunReport::new(
                "search factor",
                ins,
                json!({ "status": "exhausted", "witness": null, "program_index": null, "rounds": rounds, "bound": null, "within_bound": null }),
            )
            .rounds_against(Some(rounds), None)
            .warn("divisor search exhausted; rerun with --fallback or plant a divisor table");
            return Ok(report.into());
        }
        Err(e) => return Err(e.into()),
    };
    let splits: Vec<Value> = f
        .splits
        .iter()
        .map(|s| match s.source {
            SplitSource::Search { program_index, rounds } => {
                let bound = iteration_bound(s.n, s.divisor, &sc);
                json!({
                    "n": s.n, "divisor": s.divisor, "source": "search", "program_index": program_index,
                    "rounds": rounds, "bound": bound.to_string(), "within_bound": rounds as u128 <= bound,
                })
            }
            SplitSource::TrialDivision => json!({ "n": s.n, "divisor": s.divisor, "source": "trial_division" }),
        })
        .collect();
    let first = f.splits.first();
    let (witness, program_index, rounds, bound) = match first.map(|s| (s, s.source)) {
        Some((s, SplitSource::Search { program_index, rounds })) => {
            (Some(s.divisor), Some(program_index), Some(rounds), Some(iteration_bound(n, s.divisor, &sc)))
        }
        Some((s, SplitSource::TrialDivision)) => (Some(s.divisor), None, None, None),
        None => (None, None, None, None),
    };
    let status = if f.splits.is_empty() { "prime" } else { "factored" };
    let mut report = RunReport::new(
        "search factor",
        ins,
        json!({
            "status": status,
            "primes": f.primes,
            "witness": witness,
            "program_index": program_index,
            "rounds": rounds,
            "bound": bound.map(|b| b.to_string()),
            "within_bound": rounds.zip(bound).map(|(r, b)| r as u128 <= b),
            "splits": splits,
        }),
    )
    .rounds_against(rounds, bound);
    let fallbacks = f.splits.iter().filter(|s| s.source == SplitSource::TrialDivision).count();
    if fallbacks > 0 {
        report = report.warn(format!("trial division finished {fallbacks} of {} splits", f.splits.len()));
    }
    Ok(report.into())
}

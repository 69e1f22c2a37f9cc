use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use workbench_core::chaitin::chaitin_search;
use workbench_core::logic::zfc::classify;
use workbench_core::logic::{
    enumerate_proofs, godel_code, parse_formula, theory_registry, verify_proof, EffectiveTheory, Formula, Proof,
    TheoryParams,
};
use workbench_core::reduce::{oracle_registry, reduce as fold, OracleParams, Provenance, Refutation};

use crate::cli::{LogicCommand, ProofBudgets};
use crate::config::WorkbenchConfig;
use crate::report::{inputs, RunReport};
use crate::{Output, UsageError};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Non-blank lines that are not `#` comments.
fn formula_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    Ok(read(path)?
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn formulas(path: &Path) -> Result<Vec<Formula>> {
    formula_lines(path)?
        .into_iter()
        .map(|(n, l)| parse_formula(&l).with_context(|| format!("{}:{n}", path.display())))
        .collect()
}

/// `zfc`, `toy`, or a JSON toy-theory file.
pub fn theory(name: &str) -> Result<Arc<dyn EffectiveTheory>> {
    let registry = theory_registry();
    let built = if registry.contains(name) {
        registry.build(name, &TheoryParams::default())?
    } else if Path::new(name).is_file() {
        registry.build("toy", &TheoryParams { source: Some(read(Path::new(name))?) })?
    } else {
        bail!(UsageError(format!("unknown theory {name:?}; known: {}, or a JSON theory file", registry.names().join(", "))));
    };
    Ok(Arc::from(built))
}

pub fn logic(config: &WorkbenchConfig, cmd: &LogicCommand) -> Result<Output> {
    match cmd {
        LogicCommand::Parse { input } => {
            let items: Vec<Value> = formulas(input)?
                .iter()
                .map(|f| {
                    json!({
                        "printed": f.to_string(),
                        "size": f.size(),
                        "free_vars": f.free_vars(),
                        "zfc_axiom": classify(f),
                        "tree": f,
                    })
                })
                .collect();
            Ok(RunReport::new("logic parse", inputs([("in", json!(input))]), json!({ "formulas": items })).into())
        }
        LogicCommand::Print { input } => {
            let printed: Vec<String> = formulas(input)?.iter().map(Formula::to_string).collect();
            Ok(RunReport::new("logic print", inputs([("in", json!(input))]), json!({ "formulas": printed })).into())
        }
        LogicCommand::Godel { input } => {
            let codes: Vec<Value> = formulas(input)?
                .iter()
                .map(|f| json!({ "formula": f.to_string(), "code": godel_code(f).to_string() }))
                .collect();
            Ok(RunReport::new("logic godel", inputs([("in", json!(input))]), json!({ "codes": codes })).into())
        }
        LogicCommand::Verify { input, theory: name } => {
            let t = theory(name)?;
            let proof = Proof::parse_text(&read(input)?, t.as_ref())?;
            verify_proof(&proof, t.as_ref())?;
            let lines: Vec<String> = proof.to_text().lines().map(str::to_string).collect();
            let outcome = json!({
                "valid": true,
                "theory": t.name(),
                "lines": lines,
                "conclusion": proof.conclusion().map(Formula::to_string),
                "code": proof.code().to_string(),
            });
            Ok(RunReport::new("logic verify", inputs([("in", json!(input)), ("theory", json!(name))]), outcome).into())
        }
        LogicCommand::Enumerate { theory: name, budgets, limit } => {
            let t = theory(name)?;
            let code_budget = budgets.code_budget.unwrap_or(config.budgets.code);
            let step_budget = budgets.step_budget.unwrap_or(config.budgets.step);
            let proofs: Vec<Value> = enumerate_proofs(t.as_ref(), code_budget, step_budget)
                .take(*limit)
                .map(|e| json!({ "code": e.code.to_string(), "proof": e.proof.to_code_text() }))
                .collect();
            let report = RunReport::new(
                "logic enumerate",
                inputs([
                    ("theory", json!(name)),
                    ("code_budget", json!(code_budget.to_string())),
                    ("step_budget", json!(step_budget)),
                    ("limit", json!(limit)),
                ]),
                json!({ "count": proofs.len(), "proofs": proofs }),
            );
            Ok(report.into())
        }
    }
}

pub fn chaitin(config: &WorkbenchConfig, theory_file: Option<&Path>, l: u64, budgets: &ProofBudgets) -> Result<Output> {
    let t = match theory_file {
        Some(p) => theory(&p.to_string_lossy())?,
        None => theory("toy")?,
    };
    let code_budget = budgets.code_budget.unwrap_or(config.budgets.code);
    let step_budget = budgets.step_budget.unwrap_or(config.budgets.step);
    let hit = chaitin_search(t.as_ref(), l, code_budget, step_budget);
    let outcome = match &hit {
        Some(h) => json!({ "found": true, "x": h.x, "code": h.code.to_string(), "proof": h.proof.to_code_text() }),
        None => json!({ "found": false }),
    };
    let mut report = RunReport::new(
        "chaitin-search",
        inputs([
            ("theory", json!(t.name())),
            ("L", json!(l)),
            ("code_budget", json!(code_budget.to_string())),
            ("step_budget", json!(step_budget)),
        ]),
        outcome,
    );
    if hit.is_none() {
        report = report.warn(format!("no proof of a claim {l} <= Kol(x) with code <= {code_budget}"));
    }
    Ok(report.into())
}

fn provenance_tag(p: &Provenance) -> Value {
    match p {
        Provenance::FromBase => json!("base"),
        Provenance::Kept => json!("kept"),
        Provenance::Negated(Refutation::Proof(proof)) => json!({ "negated_by_proof": proof.to_code_text() }),
        Provenance::Negated(Refutation::Certificate { oracle, detail }) => {
            json!({ "negated_by": oracle, "certificate": detail })
        }
    }
}

pub fn reduce(
    config: &WorkbenchConfig,
    base: Option<&Path>,
    candidates: &Path,
    oracle: &str,
    theory_name: &str,
    budgets: &ProofBudgets,
) -> Result<Output> {
    let f1 = match base {
        Some(p) => formulas(p)?,
        None => Vec::new(),
    };
    let f2 = formulas(candidates)?;
    let registry = oracle_registry();
    if !registry.contains(oracle) {
        bail!(UsageError(format!("unknown oracle {oracle:?}; known: {}", registry.names().join(", "))));
    }
    let params = OracleParams {
        theory: Some(theory(theory_name)?),
        code_budget: budgets.code_budget.unwrap_or(OracleParams::default().code_budget),
        step_budget: budgets.step_budget.unwrap_or(config.budgets.step),
    };
    let o = registry.build(oracle, &params)?;
    let decided = fold(&f1, &f2, o.as_ref())?;
    let rows: Vec<Value> = decided
        .formulas
        .iter()
        .zip(&decided.provenance)
        .map(|(f, p)| json!({ "formula": f.to_string(), "provenance": provenance_tag(p) }))
        .collect();
    let report = RunReport::new(
        "reduce",
        inputs([
            ("base", json!(base)),
            ("candidates", json!(candidates)),
            ("oracle", json!(oracle)),
            ("code_budget", json!(params.code_budget.to_string())),
            ("step_budget", json!(params.step_budget)),
        ]),
        json!({ "decided": rows }),
    )
    .warnings(decided.warnings);
    Ok(report.into())
}

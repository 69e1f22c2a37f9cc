use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use serde_json::json;
use workbench_core::chaitin::{exceeds, kol_upper, l_of_t};
use workbench_core::codec;
use workbench_core::knowledge_table::{query_steps, KnowledgeTable};
use workbench_core::logic::theory_registry;
use workbench_core::machine::{decode_program, encode_program, run_traced, Program, RunOutcome};
use workbench_core::reduce::oracle_registry;
use workbench_core::search::{knowledge_registry, language_registry};

use crate::cli::{TableCommand, VmCommand};
use crate::config::{load_table, WorkbenchConfig};
use crate::report::{inputs, RunReport};
use crate::{Output, UsageError};

pub fn encode(config: &WorkbenchConfig, alphabet: &str, text: &str) -> Result<Output> {
    let a = config.alphabet(alphabet)?;
    let code = codec::encode(text, &a)?;
    let report = RunReport::new(
        "encode",
        inputs([("alphabet", json!(alphabet)), ("text", json!(text))]),
        json!({ "value": code.to_string(), "base": a.base() }),
    );
    Ok(report.into())
}

pub fn decode(config: &WorkbenchConfig, alphabet: &str, value: &str) -> Result<Output> {
    let a = config.alphabet(alphabet)?;
    let v = BigUint::from_str(value).map_err(|_| UsageError(format!("--value must be a natural number, got {value:?}")))?;
    let report = RunReport::new(
        "decode",
        inputs([("alphabet", json!(alphabet)), ("value", json!(value))]),
        json!({ "text": codec::decode(&v, &a), "base": a.base() }),
    );
    Ok(report.into())
}

/// A decimal code, a file of assembly or compact text, or compact text inline.
fn load_program(spec: &str) -> Result<Program> {
    if !spec.is_empty() && spec.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(decode_program(&BigUint::from_str(spec)?));
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let trimmed = text.trim();
        let compact = Program::from_code_text(trimmed);
        if compact.to_code_text() == trimmed {
            return Ok(compact);
        }
        return Program::from_assembly(&text).with_context(|| format!("assembling {spec}"));
    }
    let p = Program::from_code_text(spec);
    if p.to_code_text() != spec {
        bail!(UsageError(format!("{spec:?} is neither a file, a decimal code nor canonical program text")));
    }
    Ok(p)
}

pub fn vm(config: &WorkbenchConfig, cmd: &VmCommand) -> Result<Output> {
    let VmCommand::Run { program, input, budget, trace } = cmd;
    let p = load_program(program)?;
    let budget = budget.unwrap_or(config.budgets.step);
    let (outcome, lines) = run_traced(&p, input, budget);
    let trace_lines: Vec<String> = if *trace { lines.iter().map(ToString::to_string).collect() } else { Vec::new() };
    let (result, steps) = match &outcome {
        RunOutcome::Halted { output, steps } => (json!({ "status": "halted", "output": output }), *steps),
        RunOutcome::BudgetExhausted { state } => (json!({ "status": "budget_exhausted", "pc": state.pc }), state.steps),
    };
    let mut result = result;
    result["program_code"] = json!(encode_program(&p).to_string());
    if *trace {
        result["trace"] = json!(trace_lines);
    }
    let report = RunReport::new(
        "vm run",
        inputs([("program", json!(program)), ("input", json!(input)), ("budget", json!(budget))]),
        result,
    )
    .steps(steps);
    Ok(Output { report, preamble: trace_lines })
}

fn read_values(path: &Path) -> Result<Vec<u64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().with_context(|| format!("bad value {t:?} in {}", path.display())))
        .collect()
}

pub fn table(cmd: &TableCommand) -> Result<Output> {
    match cmd {
        TableCommand::Build { values, out } => {
            let seq = read_values(values)?;
            let table = KnowledgeTable::build(&seq)?;
            std::fs::write(out, table.to_bytes()).with_context(|| format!("writing {}", out.display()))?;
            let compiled = table.compile();
            let report = RunReport::new(
                "table build",
                inputs([("values", json!(values)), ("out", json!(out))]),
                json!({
                    "length": table.length(),
                    "depth": table.depth(),
                    "program_instructions": compiled.program.instructions.len(),
                }),
            );
            Ok(report.into())
        }
        TableCommand::Query { table, k, show_steps } => {
            let t = load_table(table)?;
            let (value, steps) = t.compile().query(*k)?;
            let mut outcome = json!({ "value": value });
            if *show_steps {
                outcome["steps"] = json!(steps);
            }
            let report = RunReport::new("table query", inputs([("table", json!(table)), ("k", json!(k))]), outcome)
                .steps_against(steps, query_steps(*k, value) as u128);
            Ok(report.into())
        }
    }
}

pub fn kol(config: &WorkbenchConfig, x: u64, max_len: usize, budget: Option<u64>) -> Result<Output> {
    if max_len > 5 {
        bail!(UsageError("--max-len above 5 enumerates too many programs".into()));
    }
    let budget = budget.unwrap_or(config.budgets.step);
    let est = kol_upper(x, max_len, budget);
    let mut report =
        RunReport::new("kol", inputs([("x", json!(x)), ("max_len", json!(max_len)), ("budget", json!(budget))]), json!({
            "upper_bound": est.bound,
            "witness": est.witness_program.as_ref().map(Program::to_assembly),
            "witness_text": est.witness_program.as_ref().map(Program::to_code_text),
            "witness_code": est.witness_code,
        }));
    if est.bound.is_none() {
        report = report.warn(format!("no program of length <= {max_len} prints {x} within {budget} steps"));
    }
    Ok(report.into())
}

pub fn lthreshold(c: u64) -> Output {
    let t = l_of_t(c);
    let report = RunReport::new("lthreshold", inputs([("c", json!(c))]), json!({
        "L": t.l,
        "exceeds_at_L": exceeds(t.l, c),
        "exceeds_at_L_minus_1": t.l > 0 && exceeds(t.l - 1, c),
        "at_most_2C": t.l <= 2 * c,
    }));
    let report = if t.l > 2 * c { report.warn(format!("L = {} exceeds 2C for C = {c}", t.l)) } else { report };
    report.into()
}

pub fn registry() -> Output {
    let describe = |pairs: Vec<(&str, &str)>| pairs.into_iter().map(|(n, d)| json!({ "name": n, "description": d })).collect::<Vec<_>>();
    let outcome = json!({
        "consistency_oracles": describe(oracle_registry().describe()),
        "theories": describe(theory_registry().describe()),
        "languages": describe(language_registry().describe()),
        "knowledge_functions": describe(knowledge_registry().describe()),
    });
    RunReport::new("registry", json!({}), outcome).into()
}

mod basic;
mod cli;
mod config;
mod logic_cmds;
mod report;
mod search_cmds;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::config::WorkbenchConfig;
use crate::report::{Format, RunReport};

/// A well-formed command line that asks for something meaningless; exits 2
/// like a parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// A report plus lines printed ahead of it in human mode (e.g. traces).
pub struct Output {
    pub report: RunReport,
    pub preamble: Vec<String>,
}

impl From<RunReport> for Output {
    fn from(report: RunReport) -> Self {
        Output { report, preamble: Vec::new() }
    }
}

fn dispatch(cli: &Cli, config: &WorkbenchConfig) -> anyhow::Result<Output> {
    match &cli.command {
        Command::Encode { alphabet, text } => basic::encode(config, alphabet, text),
        Command::Decode { alphabet, value } => basic::decode(config, alphabet, value),
        Command::Vm(c) => basic::vm(config, c),
        Command::Table(c) => basic::table(c),
        Command::Kol { x, max_len, budget } => basic::kol(config, *x, *max_len, *budget),
        Command::Lthreshold { c } => Ok(basic::lthreshold(*c)),
        Command::Registry => Ok(basic::registry()),
        Command::Logic(c) => logic_cmds::logic(config, c),
        Command::ChaitinSearch { theory, l, budgets } => logic_cmds::chaitin(config, theory.as_deref(), *l, budgets),
        Command::Reduce { base, candidates, oracle, theory, budgets } => {
            logic_cmds::reduce(config, base.as_deref(), candidates, oracle, theory, budgets)
        }
        Command::Search(c) => search_cmds::search(config, c),
        Command::Schema => unreachable!("handled before dispatch"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = match WorkbenchConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Command::Schema = cli.command {
        print!("{}", report::SCHEMA);
        return ExitCode::SUCCESS;
    }
    let format = if cli.json { Format::Json } else { cli.format.or(config.format).unwrap_or_default() };
    match dispatch(&cli, &config) {
        Ok(out) => {
            if format == Format::Human {
                for line in &out.preamble {
                    println!("{line}");
                }
            }
            print!("{}", out.report.render(format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.chain().any(|c| c.is::<UsageError>());
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_plant, PlantEntry};
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "workbench", version, about = "Step-exact computability workbench")]
pub struct Cli {
    /// TOML configuration file; defaults to $WORKBENCH_CONFIG.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report format; overrides the configuration.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bijective base-B code of a text.
    Encode {
        #[arg(long, default_value = "latin")]
        alphabet: String,
        #[arg(long)]
        text: String,
    },
    /// Text of a bijective base-B code.
    Decode {
        #[arg(long, default_value = "latin")]
        alphabet: String,
        #[arg(long)]
        value: String,
    },
    /// Register machine.
    #[command(subcommand)]
    Vm(VmCommand),
    /// Exact-time knowledge tables.
    #[command(subcommand)]
    Table(TableCommand),
    /// Formulas, proofs and ZFC.
    #[command(subcommand)]
    Logic(LogicCommand),
    /// Upper bound on Kol(x) by exhaustive dovetailing of short programs.
    Kol {
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Least L with L > log2(L) + C.
    Lthreshold {
        #[arg(long)]
        c: u64,
    },
    /// Search a theory's proofs for the first claim `L <= Kol(x)`.
    ChaitinSearch {
        /// JSON theory file {name, axioms}; the built-in toy theory if absent.
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long = "L")]
        l: u64,
        #[command(flatten)]
        budgets: ProofBudgets,
    },
    /// Decide each candidate or its negation against a consistency oracle.
    Reduce {
        /// One formula per line.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value = "truthtable")]
        oracle: String,
        /// Theory for the search oracle: zfc, toy, or a JSON toy-theory file.
        #[arg(long, default_value = "toy")]
        theory: String,
        #[command(flatten)]
        budgets: ProofBudgets,
    },
    /// Dovetailing universal search.
    #[command(subcommand)]
    Search(SearchCommand),
    /// List the registered strategy families.
    Registry,
    /// Print the JSON schema of the report.
    Schema,
}

#[derive(Debug, Args)]
pub struct ProofBudgets {
    #[arg(long)]
    pub code_budget: Option<u128>,
    #[arg(long)]
    pub step_budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum VmCommand {
    /// Run a program given as a decimal code, a file of assembly, or compact text.
    Run {
        #[arg(long)]
        program: String,
        /// Comma-separated inputs loaded into R1, R2, ...
        #[arg(long, value_delimiter = ',')]
        input: Vec<u64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Print one `step,pc,opcode,regs-delta` line per step.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableCommand {
    /// Build a table file from comma- or newline-separated values a_0, a_1, ...
    Build {
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Query a table through its compiled lookup machine.
    Query {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        show_steps: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum LogicCommand {
    /// Parse a formula file (one per line) and show its structure.
    Parse {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print formulas in canonical form.
    Print {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Gödel codes of formulas, one per line.
    Godel {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Verify a proof file: one `formula ⊢ justification` per line.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "zfc")]
        theory: String,
    },
    /// Proofs in increasing code order.
    Enumerate {
        #[arg(long, default_value = "toy")]
        theory: String,
        #[command(flatten)]
        budgets: ProofBudgets,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Programs 0..Z take part.
    #[arg(long)]
    pub z: Option<u64>,
    #[arg(long)]
    pub rounds: Option<u64>,
    /// Plant a table file: path@index or path@index@c.
    #[arg(long, value_parser = parse_plant)]
    pub plant: Vec<PlantEntry>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Factor n by repeated divisor search.
    Factor {
        #[arg(long)]
        n: u64,
        /// Finish exhausted searches by trial division.
        #[arg(long)]
        fallback: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide membership of n with a verifier pair.
    Decide {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "parity")]
        verifier: String,
        /// JSON verifier file for --verifier file.
        #[arg(long)]
        verifier_file: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check exact-time knowledge of a function on n < N.
    CheckKnowledge {
        #[arg(long = "fn")]
        function: String,
        #[arg(long = "N")]
        domain: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
}

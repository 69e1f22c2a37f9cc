use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use workbench_core::codec::Alphabet;
use workbench_core::knowledge_table::KnowledgeTable;
use workbench_core::logic::{logic_alphabet, proof_alphabet};
use workbench_core::machine::program_alphabet;
use workbench_core::search::SearchConfig;

use crate::report::Format;

/// Optional TOML configuration. Command-line flags override every field.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkbenchConfig {
    /// Extra alphabets by name, each given as its symbol string.
    pub alphabets: BTreeMap<String, String>,
    pub budgets: Budgets,
    pub planted: Vec<PlantEntry>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub code: u128,
    pub step: u64,
    pub round: u64,
    pub z_bound: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { code: 1_000_000, step: 1_000, round: 1_000, z_bound: 64 }
    }
}

/// A knowledge-table file planted at a program index.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantEntry {
    pub path: PathBuf,
    pub index: u64,
    #[serde(default = "one")]
    pub c: u64,
}

fn one() -> u64 {
    1
}

impl WorkbenchConfig {
    /// `--config` wins over `WORKBENCH_CONFIG`; neither means defaults.
    pub fn load(flag: Option<&Path>) -> Result<Self> {
        let path = match flag {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os("WORKBENCH_CONFIG").map(PathBuf::from),
        };
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
        let config: WorkbenchConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolved(base)
    }

    /// Resolve plant paths against the config's directory and check them.
    fn resolved(mut self, base: &Path) -> Result<Self> {
        for p in &mut self.planted {
            if p.path.is_relative() {
                p.path = base.join(&p.path);
            }
            load_table(&p.path)?;
            if p.index >= self.budgets.z_bound {
                bail!("planted index {} is not below z_bound {}", p.index, self.budgets.z_bound);
            }
        }
        Ok(self)
    }

    /// Built-in alphabets plus the configured ones.
    pub fn alphabet(&self, name: &str) -> Result<Alphabet> {
        match name {
            "latin" => Ok(Alphabet::latin()),
            "logic" => Ok(logic_alphabet().clone()),
            "proof" => Ok(proof_alphabet().clone()),
            "program" => Ok(program_alphabet().clone()),
            _ => match self.alphabets.get(name) {
                Some(symbols) => Ok(Alphabet::new(name, symbols.chars())?),
                None => match name.strip_prefix("inline:") {
                    Some(symbols) => Ok(Alphabet::new("inline", symbols.chars())?),
                    None => bail!(crate::UsageError(format!(
                        "unknown alphabet {name:?}; use latin, logic, proof, program, a configured name or inline:<symbols>"
                    ))),
                },
            },
        }
    }

    /// A search configuration with the configured plants and any extra ones.
    pub fn search_config(&self, z: Option<u64>, rounds: Option<u64>, extra: &[PlantEntry], workers: usize) -> Result<SearchConfig> {
        let mut config = SearchConfig {
            z_bound: z.unwrap_or(self.budgets.z_bound),
            round_budget: rounds.unwrap_or(self.budgets.round),
            planted: Vec::new(),
            workers,
        };
        for p in self.planted.iter().chain(extra) {
            let table = load_table(&p.path)?;
            config = config.plant(p.index, table.compile().program, p.c, format!("table {}", p.path.display()));
        }
        config.validate()?;
        Ok(config)
    }
}

pub fn load_table(path: &Path) -> Result<KnowledgeTable> {
    let bytes = std::fs::read(path).with_context(|| format!("reading table {}", path.display()))?;
    KnowledgeTable::from_bytes(&bytes).with_context(|| format!("table {}", path.display()))
}

/// `path@index` or `path@index@c`.
pub fn parse_plant(s: &str) -> Result<PlantEntry, String> {
    let mut parts = s.rsplitn(3, '@').collect::<Vec<_>>();
    parts.reverse();
    let num = |t: &str| t.parse::<u64>().map_err(|_| format!("bad number {t:?} in plant {s:?}"));
    match parts.as_slice() {
        [path, idx] => Ok(PlantEntry { path: path.into(), index: num(idx)?, c: 1 }),
        [path, idx, c] => Ok(PlantEntry { path: path.into(), index: num(idx)?, c: num(c)? }),
        _ => Err(format!("expected path@index[@c], got {s:?}")),
    }
}

//! Scenario and pool documents.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use teamneg_core::{AttributeSpec, Domain, ProfilePool};

use crate::error::{HarnessError, Result};

pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/group_booking.toml");

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub domain: Domain,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(rename = "attribute")]
    attributes: Vec<AttributeSpec>,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(Self {
            name: file.name,
            domain: Domain::new(file.attributes)?,
        })
    }

    pub fn to_toml_string(&self) -> String {
        let file = ScenarioFile {
            name: self.name.clone(),
            attributes: self.domain.attributes().to_vec(),
        };
        toml::to_string(&file).expect("scenarios serialize")
    }

    pub fn builtin() -> Self {
        Self::from_toml_str(DEFAULT_SCENARIO).expect("built-in scenario parses")
    }

    /// The built-in scenario when `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::builtin()),
            Some(p) => Self::from_toml_str(&read(p)?),
        }
    }
}

/// A generated profile pool and the seed that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PoolFile {
    pub seed: u64,
    pub pool: ProfilePool,
}

#[derive(Deserialize)]
struct PoolHeader {
    seed: u64,
}

impl PoolFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let header: PoolHeader = table
            .remove("seed")
            .map(|v| toml::Table::from_iter([("seed".to_string(), v)]))
            .ok_or_else(|| HarnessError::Config("pool file has no `seed`".into()))
            .and_then(|t| t.try_into().map_err(|e: toml::de::Error| HarnessError::Config(e.to_string())))?;
        let body = toml::to_string(&table).expect("tables serialize");
        Ok(Self {
            seed: header.seed,
            pool: ProfilePool::from_toml_str(&body)?,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let seed = i64::try_from(self.seed)
            .map_err(|_| HarnessError::Config(format!("pool seed {} exceeds {}", self.seed, i64::MAX)))?;
        Ok(format!("seed = {seed}\n\n{}", self.pool.to_toml_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&read(path)?)
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

/// Write through a temporary file in the target directory so a failed run
/// never leaves a partial file behind.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir, e))?;
    {
        let mut out = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut out)?;
        out.flush().map_err(|e| HarnessError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| HarnessError::io(path, e.error))?;
    Ok(())
}

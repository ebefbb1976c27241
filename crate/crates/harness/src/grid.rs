//! Experiment cells and grid specifications.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use teamneg_core::{BetaClass, DeadlineClass, SimilarityClass, Strategy};

use crate::error::HarnessError;

/// Environment conditions shared by the configurations compared in one block
/// of a results table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Environment {
    pub similarity: SimilarityClass,
    pub team_deadline: DeadlineClass,
    pub opp_deadline: DeadlineClass,
    pub team_size: usize,
    pub opp_beta: BetaClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExperimentCell {
    pub similarity: SimilarityClass,
    pub team_deadline: DeadlineClass,
    pub opp_deadline: DeadlineClass,
    pub team_size: usize,
    pub strategy: Strategy,
    pub team_beta: BetaClass,
    pub opp_beta: BetaClass,
}

impl ExperimentCell {
    pub fn environment(&self) -> Environment {
        Environment {
            similarity: self.similarity,
            team_deadline: self.team_deadline,
            opp_deadline: self.opp_deadline,
            team_size: self.team_size,
            opp_beta: self.opp_beta,
        }
    }
}

pub const MAX_TEAM_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    #[serde(default = "default_teams")]
    pub teams: usize,
    #[serde(default = "default_opponents")]
    pub opponents_per_team: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
}

fn default_teams() -> usize {
    100
}

fn default_opponents() -> usize {
    12
}

fn default_repetitions() -> usize {
    4
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            teams: default_teams(),
            opponents_per_team: default_opponents(),
            repetitions: default_repetitions(),
        }
    }
}

impl Sampling {
    pub fn negotiations_per_cell(&self) -> usize {
        self.teams * self.opponents_per_team * self.repetitions
    }
}

/// Cartesian product of the listed conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub similarity: Vec<SimilarityClass>,
    pub team_deadline: Vec<DeadlineClass>,
    pub opp_deadline: Vec<DeadlineClass>,
    pub team_size: Vec<usize>,
    pub strategy: Vec<Strategy>,
    pub team_beta: Vec<BetaClass>,
    pub opp_beta: Vec<BetaClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub name: String,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(rename = "block")]
    pub blocks: Vec<GridBlock>,
}

pub const PRESETS: [&str; 5] = ["table2", "table3", "table4", "fig1-3", "fig4"];

impl GridSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let spec: GridSpec = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("grid specs serialize")
    }

    pub fn preset(name: &str) -> Result<Self, HarnessError> {
        let text = match name {
            "table2" => include_str!("../grids/table2.toml"),
            "table3" => include_str!("../grids/table3.toml"),
            "table4" => include_str!("../grids/table4.toml"),
            "fig1-3" => include_str!("../grids/fig1-3.toml"),
            "fig4" => include_str!("../grids/fig4.toml"),
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown preset `{other}`, expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        };
        Self::from_toml_str(text)
    }

    fn validate(&self) -> Result<(), HarnessError> {
        if self.blocks.is_empty() {
            return Err(HarnessError::Config(format!("grid `{}` has no blocks", self.name)));
        }
        let s = &self.sampling;
        if s.teams == 0 || s.opponents_per_team == 0 || s.repetitions == 0 {
            return Err(HarnessError::Config("sampling counts must be positive".into()));
        }
        for (i, block) in self.blocks.iter().enumerate() {
            let empty = block.similarity.is_empty()
                || block.team_deadline.is_empty()
                || block.opp_deadline.is_empty()
                || block.team_size.is_empty()
                || block.strategy.is_empty()
                || block.team_beta.is_empty()
                || block.opp_beta.is_empty();
            if empty {
                return Err(HarnessError::Config(format!("block {i} has an empty condition list")));
            }
            if let Some(m) = block.team_size.iter().find(|m| **m == 0 || **m > MAX_TEAM_SIZE) {
                return Err(HarnessError::Config(format!(
                    "team size {m} outside [1, {MAX_TEAM_SIZE}]"
                )));
            }
        }
        Ok(())
    }

    /// Cells in block order, strategies varying fastest; duplicates keep
    /// their first position.
    pub fn cells(&self) -> Vec<ExperimentCell> {
        let mut seen = BTreeSet::new();
        let mut cells = Vec::new();
        for b in &self.blocks {
            for &similarity in &b.similarity {
                for &team_deadline in &b.team_deadline {
                    for &opp_deadline in &b.opp_deadline {
                        for &team_size in &b.team_size {
                            for &opp_beta in &b.opp_beta {
                                for &team_beta in &b.team_beta {
                                    for &strategy in &b.strategy {
                                        let cell = ExperimentCell {
                                            similarity,
                                            team_deadline,
                                            opp_deadline,
                                            team_size,
                                            strategy,
                                            team_beta,
                                            opp_beta,
                                        };
                                        if seen.insert(cell) {
                                            cells.push(cell);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        cells
    }
}

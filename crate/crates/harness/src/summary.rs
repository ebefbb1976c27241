//! Per-cell aggregates and best-equivalent marking.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use teamneg_core::{BetaClass, DeadlineClass, SimilarityClass, Strategy};

use crate::error::{HarnessError, Result};
use crate::grid::{Environment, ExperimentCell};
use crate::runner::ResultRow;
use crate::stats::{mean, welch_t_test, ALPHA};

/// Which configurations compete for the best-equivalent marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grouping {
    /// Strategies compete at a fixed team concession class.
    Strategy,
    /// Every strategy and team concession class of an environment competes.
    StrategyBeta,
}

impl Grouping {
    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::Strategy => "strategy",
            Grouping::StrategyBeta => "strategy-beta",
        }
    }
}

impl FromStr for Grouping {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strategy" => Ok(Grouping::Strategy),
            "strategy-beta" => Ok(Grouping::StrategyBeta),
            other => Err(HarnessError::Config(format!(
                "unknown grouping `{other}`, expected strategy or strategy-beta"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct GroupKey {
    environment: Environment,
    team_beta: Option<BetaClass>,
}

fn group_key(cell: &ExperimentCell, grouping: Grouping) -> GroupKey {
    GroupKey {
        environment: cell.environment(),
        team_beta: match grouping {
            Grouping::Strategy => Some(cell.team_beta),
            Grouping::StrategyBeta => None,
        },
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub cell: ExperimentCell,
    pub sample_count: usize,
    pub success_rate: f64,
    pub mean_min: f64,
    pub mean_avg: f64,
    pub mean_rounds: f64,
    /// Not significantly worse than the best Min of its comparison group.
    pub best_min: bool,
    /// Not significantly worse than the best Ave of its comparison group.
    pub best_avg: bool,
}

#[derive(Serialize)]
struct SummaryRecord {
    similarity_class: SimilarityClass,
    team_deadline_class: DeadlineClass,
    opp_deadline_class: DeadlineClass,
    team_size: usize,
    opp_beta_class: BetaClass,
    team_beta_class: BetaClass,
    strategy: Strategy,
    sample_count: usize,
    success_rate: f64,
    mean_min: f64,
    mean_avg: f64,
    mean_rounds: f64,
    best_min: bool,
    best_avg: bool,
}

struct CellSamples {
    cell: ExperimentCell,
    min: Vec<f64>,
    avg: Vec<f64>,
    rounds: Vec<f64>,
    successes: usize,
}

/// Cells in order of first appearance.
pub fn summarize(rows: &[ResultRow], grouping: Grouping) -> Vec<CellSummary> {
    let mut index = HashMap::new();
    let mut cells: Vec<CellSamples> = Vec::new();
    for row in rows {
        let cell = row.cell();
        let i = *index.entry(cell).or_insert_with(|| {
            cells.push(CellSamples {
                cell,
                min: Vec::new(),
                avg: Vec::new(),
                rounds: Vec::new(),
                successes: 0,
            });
            cells.len() - 1
        });
        let s = &mut cells[i];
        s.min.push(row.min_utility);
        s.avg.push(row.avg_utility);
        s.rounds.push(row.rounds as f64);
        s.successes += row.success as usize;
    }

    let mut groups: HashMap<GroupKey, Vec<usize>> = HashMap::new();
    for (i, s) in cells.iter().enumerate() {
        groups.entry(group_key(&s.cell, grouping)).or_default().push(i);
    }
    let mut best_min = vec![false; cells.len()];
    let mut best_avg = vec![false; cells.len()];
    for members in groups.values() {
        mark_best(members, |i| &cells[i].min, &mut best_min);
        mark_best(members, |i| &cells[i].avg, &mut best_avg);
    }

    cells
        .iter()
        .enumerate()
        .map(|(i, s)| CellSummary {
            cell: s.cell,
            sample_count: s.min.len(),
            success_rate: s.successes as f64 / s.min.len() as f64,
            mean_min: mean(&s.min),
            mean_avg: mean(&s.avg),
            mean_rounds: mean(&s.rounds),
            best_min: best_min[i],
            best_avg: best_avg[i],
        })
        .collect()
}

/// Flags the configuration with the highest mean and every configuration
/// whose difference from it is not significant.
fn mark_best<'a>(members: &[usize], samples: impl Fn(usize) -> &'a [f64], flags: &mut [bool]) {
    let best = *members
        .iter()
        .max_by(|&&a, &&b| mean(samples(a)).total_cmp(&mean(samples(b))).then(b.cmp(&a)))
        .expect("groups are nonempty");
    let top = mean(samples(best));
    for &i in members {
        flags[i] = i == best
            || mean(samples(i)) == top
            || match welch_t_test(samples(i), samples(best), ALPHA) {
                Ok(r) => !r.significant,
                Err(_) => false,
            };
    }
}

pub fn write_summary_csv(out: &mut dyn std::io::Write, summaries: &[CellSummary]) -> Result<()> {
    let err = |e: csv::Error| HarnessError::Csv {
        path: "<summary>".into(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(out);
    for s in summaries {
        let c = &s.cell;
        w.serialize(SummaryRecord {
            similarity_class: c.similarity,
            team_deadline_class: c.team_deadline,
            opp_deadline_class: c.opp_deadline,
            team_size: c.team_size,
            opp_beta_class: c.opp_beta,
            team_beta_class: c.team_beta,
            strategy: c.strategy,
            sample_count: s.sample_count,
            success_rate: s.success_rate,
            mean_min: s.mean_min,
            mean_avg: s.mean_avg,
            mean_rounds: s.mean_rounds,
            best_min: s.best_min,
            best_avg: s.best_avg,
        })
        .map_err(err)?;
    }
    w.flush().map_err(|e| HarnessError::Csv {
        path: "<summary>".into(),
        message: e.to_string(),
    })
}

/// One plain-text table per comparison group; `*` marks best-equivalent.
pub fn render_tables(summaries: &[CellSummary], grouping: Grouping) -> String {
    let mut order: Vec<GroupKey> = Vec::new();
    let mut groups: HashMap<GroupKey, Vec<&CellSummary>> = HashMap::new();
    for s in summaries {
        let key = group_key(&s.cell, grouping);
        groups.entry(key).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        groups.get_mut(&key).unwrap().push(s);
    }
    let mut out = String::new();
    for key in order {
        let e = key.environment;
        let _ = write!(
            out,
            "{} T_A={} T_op={} M={} beta_op={}",
            e.similarity,
            e.team_deadline.as_str(),
            e.opp_deadline.as_str(),
            e.team_size,
            e.opp_beta.as_str()
        );
        if let Some(b) = key.team_beta {
            let _ = write!(out, " beta_A={}", b.as_str());
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "  {:<10} {:>8} {:>8} {:>7} {:>7} {:>6}",
            "config", "Min", "Ave", "Ro", "succ", "n"
        );
        for s in &groups[&key] {
            let mark = |b: bool| if b { '*' } else { ' ' };
            let config = format!("{} {}", s.cell.strategy, s.cell.team_beta.as_str());
            let _ = writeln!(
                out,
                "  {:<10} {:>7.3}{} {:>7.3}{} {:>7.2} {:>7.3} {:>6}",
                config,
                s.mean_min,
                mark(s.best_min),
                s.mean_avg,
                mark(s.best_avg),
                s.mean_rounds,
                s.success_rate,
                s.sample_count
            );
        }
        out.push('\n');
    }
    out
}

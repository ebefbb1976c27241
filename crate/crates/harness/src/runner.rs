//! Grid execution with per-negotiation seed substreams.
//!
//! Seeds derive from the master seed along key paths, so every negotiation
//! is reproducible from its identifiers alone and the output does not depend
//! on scheduling. The strategy is not part of the environment key: all
//! strategies of one environment face the same deadlines, speeds,
//! reservation utilities, teams and opponents.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use teamneg_core::population::{
    classify_and_sample_teams, derive_seed, draw_reservation, DissimilarityMatrix, DISSIMILARITY_SAMPLES,
};
use teamneg_core::{
    run_negotiation, BetaClass, ConcessionParams, DeadlineClass, Domain, Member, MemberId, NegotiationConfig,
    NegotiationOutcome, Opponent, ProfilePool, SimilarityClass, Status, Strategy,
};

use crate::error::{HarnessError, Result};
use crate::grid::{ExperimentCell, Sampling};
use crate::metrics::{metric_avg, metric_min};

const MATRIX: u64 = 1;
const TEAMS: u64 = 2;
const OPPONENTS: u64 = 3;
const ENVIRONMENT: u64 = 4;

fn similarity_code(c: SimilarityClass) -> u64 {
    SimilarityClass::ALL.iter().position(|x| *x == c).unwrap() as u64
}

fn deadline_code(c: DeadlineClass) -> u64 {
    DeadlineClass::ALL.iter().position(|x| *x == c).unwrap() as u64
}

fn beta_code(c: BetaClass) -> u64 {
    BetaClass::ALL.iter().position(|x| *x == c).unwrap() as u64
}

fn strategy_code(s: Strategy) -> u64 {
    Strategy::ALL.iter().position(|x| *x == s).unwrap() as u64
}

/// One row per negotiation; field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub run_id: u64,
    pub seed: u64,
    pub similarity_class: SimilarityClass,
    pub team_deadline_class: DeadlineClass,
    pub opp_deadline_class: DeadlineClass,
    pub team_size: usize,
    pub strategy: Strategy,
    pub team_beta_class: BetaClass,
    pub opp_beta_class: BetaClass,
    pub team_idx: usize,
    pub opp_idx: usize,
    pub repetition: usize,
    pub team_deadline: u32,
    pub opp_deadline: u32,
    pub team_beta: f64,
    pub opp_beta: f64,
    pub status: Status,
    pub success: bool,
    pub rounds: u32,
    pub min_utility: f64,
    pub avg_utility: f64,
    pub opp_utility: f64,
}

impl ResultRow {
    pub fn cell(&self) -> ExperimentCell {
        ExperimentCell {
            similarity: self.similarity_class,
            team_deadline: self.team_deadline_class,
            opp_deadline: self.opp_deadline_class,
            team_size: self.team_size,
            strategy: self.strategy,
            team_beta: self.team_beta_class,
            opp_beta: self.opp_beta_class,
        }
    }
}

/// Identifies one negotiation within a run. `opp_idx` indexes the pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NegotiationKey {
    pub cell: ExperimentCell,
    pub team_idx: usize,
    pub opp_idx: usize,
    pub repetition: usize,
}

/// Concrete environment drawn from the cell's classes.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentDraw {
    pub team_deadline: u32,
    pub opp_deadline: u32,
    pub team_beta: f64,
    pub opp_beta: f64,
    pub member_reservations: Vec<f64>,
    pub opp_reservation: f64,
    pub seed: u64,
}

pub struct Experiment {
    domain: Domain,
    pool: ProfilePool,
    seed: u64,
    matrix: DissimilarityMatrix,
    rosters: BTreeMap<(SimilarityClass, usize), Vec<Vec<usize>>>,
}

impl Experiment {
    pub fn new(domain: Domain, pool: ProfilePool, seed: u64) -> Result<Self> {
        pool.check_domain(&domain)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[MATRIX]));
        let matrix = DissimilarityMatrix::estimate(pool.members(), DISSIMILARITY_SAMPLES, &mut rng);
        Ok(Self {
            domain,
            pool,
            seed,
            matrix,
            rosters: BTreeMap::new(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pool(&self) -> &ProfilePool {
        &self.pool
    }

    /// The first `count` teams of a class and size. Later teams never change
    /// earlier ones. Singleton teams are drawn with replacement and ignore the
    /// similarity class.
    pub fn roster(&self, class: SimilarityClass, team_size: usize, count: usize) -> Result<Vec<Vec<usize>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.seed,
            &[TEAMS, similarity_code(class), team_size as u64],
        ));
        if team_size == 1 {
            return Ok((0..count)
                .map(|_| vec![rng.random_range(0..self.pool.len())])
                .collect());
        }
        let (_, teams) = classify_and_sample_teams(&self.matrix, team_size, class, count, &mut rng)?;
        Ok(teams)
    }

    fn cached_roster(&mut self, class: SimilarityClass, team_size: usize, count: usize) -> Result<()> {
        let have = self.rosters.get(&(class, team_size)).map_or(0, Vec::len);
        if have < count {
            let teams = self.roster(class, team_size, count)?;
            self.rosters.insert((class, team_size), teams);
        }
        Ok(())
    }

    /// Pool indices of the opponents a team faces, in play order.
    pub fn opponent_half(&self, class: SimilarityClass, team_size: usize, team_idx: usize, count: usize) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            self.seed,
            &[OPPONENTS, similarity_code(class), team_size as u64, team_idx as u64],
        ));
        let mut order: Vec<usize> = (0..self.pool.len()).collect();
        order.shuffle(&mut rng);
        order.truncate(count);
        order
    }

    pub fn draw_environment(&self, key: &NegotiationKey) -> EnvironmentDraw {
        let c = &key.cell;
        let seed = derive_seed(
            self.seed,
            &[
                ENVIRONMENT,
                similarity_code(c.similarity),
                c.team_size as u64,
                deadline_code(c.team_deadline),
                deadline_code(c.opp_deadline),
                beta_code(c.team_beta),
                beta_code(c.opp_beta),
                key.team_idx as u64,
                key.opp_idx as u64,
                key.repetition as u64,
            ],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let team_deadline = c.team_deadline.sample(&mut rng);
        let opp_deadline = c.opp_deadline.sample(&mut rng);
        let team_beta = c.team_beta.sample(&mut rng);
        let opp_beta = c.opp_beta.sample(&mut rng);
        let member_reservations = (0..c.team_size).map(|_| draw_reservation(&mut rng)).collect();
        let opp_reservation = draw_reservation(&mut rng);
        EnvironmentDraw {
            team_deadline,
            opp_deadline,
            team_beta,
            opp_beta,
            member_reservations,
            opp_reservation,
            seed,
        }
    }

    pub fn config(&self, key: &NegotiationKey, team: &[usize], draw: &EnvironmentDraw) -> Result<NegotiationConfig> {
        let members = team
            .iter()
            .zip(&draw.member_reservations)
            .enumerate()
            .map(|(i, (&p, &ru))| {
                let profile = self.pool.members()[p].with_reservation(ru)?;
                let params = ConcessionParams::new(ru, draw.team_deadline, draw.team_beta, 0.0)?;
                Member::new(MemberId(i), profile, params)
            })
            .collect::<teamneg_core::Result<Vec<_>>>()?;
        let ru = draw.opp_reservation;
        let opponent = Opponent::new(
            self.pool.opponents()[key.opp_idx].with_reservation(ru)?,
            ConcessionParams::new(ru, draw.opp_deadline, draw.opp_beta, 0.0)?,
        )?;
        let seed = derive_seed(draw.seed, &[strategy_code(key.cell.strategy)]);
        Ok(NegotiationConfig::new(
            self.domain.clone(),
            members,
            opponent,
            key.cell.strategy,
            seed,
        )?)
    }

    fn run_one(&self, key: &NegotiationKey, team: &[usize], trace: bool) -> Result<(ResultRow, NegotiationOutcome)> {
        let draw = self.draw_environment(key);
        let config = self.config(key, team, &draw)?.with_trace(trace);
        let outcome = run_negotiation(&config);
        let c = key.cell;
        let row = ResultRow {
            run_id: 0,
            seed: self.seed,
            similarity_class: c.similarity,
            team_deadline_class: c.team_deadline,
            opp_deadline_class: c.opp_deadline,
            team_size: c.team_size,
            strategy: c.strategy,
            team_beta_class: c.team_beta,
            opp_beta_class: c.opp_beta,
            team_idx: key.team_idx,
            opp_idx: key.opp_idx,
            repetition: key.repetition,
            team_deadline: draw.team_deadline,
            opp_deadline: draw.opp_deadline,
            team_beta: draw.team_beta,
            opp_beta: draw.opp_beta,
            status: outcome.status,
            success: outcome.status.is_success(),
            rounds: outcome.rounds,
            min_utility: metric_min(&outcome.member_utilities),
            avg_utility: metric_avg(&outcome.member_utilities),
            opp_utility: outcome.opponent_utility,
        };
        Ok((row, outcome))
    }

    /// Every negotiation of every cell, in cell order, then team, opponent
    /// and repetition. `run_id` is the row's position in that order.
    pub fn run_cells(&mut self, cells: &[ExperimentCell], sampling: &Sampling, jobs: usize) -> Result<Vec<ResultRow>> {
        check_sampling(sampling, self.pool.len())?;
        for c in cells {
            self.cached_roster(c.similarity, c.team_size, sampling.teams)?;
        }
        let mut tasks = Vec::new();
        for c in cells {
            for team_idx in 0..sampling.teams {
                for opp_idx in self.opponent_half(c.similarity, c.team_size, team_idx, sampling.opponents_per_team) {
                    for repetition in 0..sampling.repetitions {
                        tasks.push(NegotiationKey {
                            cell: *c,
                            team_idx,
                            opp_idx,
                            repetition,
                        });
                    }
                }
            }
        }
        let this = &*self;
        let work = || {
            tasks
                .par_iter()
                .map(|key| {
                    let team = &this.rosters[&(key.cell.similarity, key.cell.team_size)][key.team_idx];
                    this.run_one(key, team, false).map(|(row, _)| row)
                })
                .collect::<Result<Vec<_>>>()
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        let mut rows = pool.install(work)?;
        for (i, row) in rows.iter_mut().enumerate() {
            row.run_id = i as u64;
        }
        Ok(rows)
    }

    /// Rerun one negotiation with its trace recorded.
    pub fn replay(&self, key: &NegotiationKey, opponents_per_team: usize) -> Result<(ResultRow, NegotiationOutcome)> {
        let c = &key.cell;
        let half = self.opponent_half(c.similarity, c.team_size, key.team_idx, opponents_per_team);
        if !half.contains(&key.opp_idx) {
            return Err(HarnessError::Config(format!(
                "opponent {} is not among the {opponents_per_team} opponents of team {}",
                key.opp_idx, key.team_idx
            )));
        }
        let teams = self.roster(c.similarity, c.team_size, key.team_idx + 1)?;
        self.run_one(key, &teams[key.team_idx], true)
    }
}

pub fn check_sampling(sampling: &Sampling, pool_size: usize) -> Result<()> {
    if sampling.opponents_per_team > pool_size {
        return Err(HarnessError::Config(format!(
            "{} opponents per team exceed the pool of {pool_size}",
            sampling.opponents_per_team
        )));
    }
    Ok(())
}

pub fn write_rows(out: &mut dyn std::io::Write, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| HarnessError::Csv {
        path: "<output>".into(),
        message: e.to_string(),
    })
}

fn csv_error(e: csv::Error) -> HarnessError {
    HarnessError::Csv {
        path: "<output>".into(),
        message: e.to_string(),
    }
}

pub fn read_rows(path: &std::path::Path) -> Result<Vec<ResultRow>> {
    let err = |e: csv::Error| HarnessError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    let headers = r.headers().map_err(err)?.clone();
    if !headers.is_empty() && headers.iter().ne(COLUMNS.iter().copied()) {
        return Err(HarnessError::Csv {
            path: path.to_path_buf(),
            message: "unexpected column layout".into(),
        });
    }
    r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>().map_err(err)
}

pub const COLUMNS: [&str; 22] = [
    "run_id",
    "seed",
    "similarity_class",
    "team_deadline_class",
    "opp_deadline_class",
    "team_size",
    "strategy",
    "team_beta_class",
    "opp_beta_class",
    "team_idx",
    "opp_idx",
    "repetition",
    "team_deadline",
    "opp_deadline",
    "team_beta",
    "opp_beta",
    "status",
    "success",
    "rounds",
    "min_utility",
    "avg_utility",
    "opp_utility",
];

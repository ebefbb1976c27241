//! Command line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teamneg_core::population::generate_pool;
use teamneg_core::trace::to_jsonl;
use teamneg_core::{BetaClass, DeadlineClass, SimilarityClass, Strategy};

use crate::error::{HarnessError, Result};
use crate::files::{read, write_atomic, PoolFile, Scenario};
use crate::grid::{ExperimentCell, GridSpec, Sampling, MAX_TEAM_SIZE};
use crate::runner::{read_rows, write_rows, Experiment, NegotiationKey};
use crate::summary::{render_tables, summarize, write_summary_csv, Grouping};

pub const JOBS_ENV: &str = "TEAMNEG_JOBS";

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_EMPTY_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "teamneg", version, about = "Team versus opponent negotiation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a pool of member profiles and their reversed opponents.
    GenPool(GenPoolArgs),
    /// Run an experiment grid and write one CSV row per negotiation.
    Run(RunArgs),
    /// Aggregate a results CSV into per-cell summaries and tables.
    Summarize(SummarizeArgs),
    /// Replay one negotiation and print its events as JSON lines.
    Trace(TraceArgs),
}

#[derive(Debug, clap::Args)]
pub struct GenPoolArgs {
    /// Scenario file; the built-in group booking scenario when omitted.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub pool: PathBuf,
    /// Grid file, or one of the presets table2, table3, table4, fig1-3, fig4.
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Negotiations run concurrently.
    #[arg(long, env = JOBS_ENV, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub jobs: u64,
    /// Override the grid's number of teams per cell.
    #[arg(long)]
    pub teams: Option<usize>,
    /// Override the grid's number of opponents per team.
    #[arg(long)]
    pub opponents: Option<usize>,
    /// Override the grid's number of repetitions.
    #[arg(long)]
    pub repetitions: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Summary CSV, one row per cell.
    #[arg(long)]
    pub out: PathBuf,
    /// Plain-text tables; standard output when omitted.
    #[arg(long)]
    pub tables: Option<PathBuf>,
    /// `strategy` or `strategy-beta`.
    #[arg(long, default_value = "strategy")]
    pub grouping: Grouping,
}

#[derive(Debug, clap::Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub pool: PathBuf,
    /// Master seed of the run being replayed.
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub similarity: SimilarityClass,
    #[arg(long)]
    pub team_deadline: DeadlineClass,
    #[arg(long)]
    pub opp_deadline: DeadlineClass,
    #[arg(long)]
    pub team_size: usize,
    #[arg(long)]
    pub strategy: Strategy,
    #[arg(long)]
    pub team_beta: BetaClass,
    #[arg(long)]
    pub opp_beta: BetaClass,
    #[arg(long)]
    pub team_idx: usize,
    /// Pool index of the opponent, as in the `opp_idx` column.
    #[arg(long)]
    pub opp_idx: usize,
    #[arg(long)]
    pub repetition: usize,
    /// Opponents per team in the replayed run.
    #[arg(long, default_value_t = Sampling::default().opponents_per_team)]
    pub opponents: usize,
}

/// Parses `args` (program name first) and runs the command.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("teamneg: {e}");
            match e {
                HarnessError::EmptyInput(_) => EXIT_EMPTY_INPUT,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenPool(a) => gen_pool(a),
        Command::Run(a) => run(a),
        Command::Summarize(a) => summarize_cmd(a),
        Command::Trace(a) => trace(a),
    }
}

fn gen_pool(a: GenPoolArgs) -> Result<()> {
    let scenario = Scenario::load(a.scenario.as_deref())?;
    let pool = generate_pool(&scenario.domain, &mut ChaCha8Rng::seed_from_u64(a.seed));
    let text = PoolFile { seed: a.seed, pool }.to_toml_string()?;
    write_atomic(&a.out, |w| w.write_all(text.as_bytes()).map_err(|e| HarnessError::io(&a.out, e)))
}

pub fn load_grid(grid: &str) -> Result<GridSpec> {
    let path = Path::new(grid);
    if path.is_file() {
        GridSpec::from_toml_str(&read(path)?)
    } else {
        GridSpec::preset(grid)
    }
}

fn run(a: RunArgs) -> Result<()> {
    let scenario = Scenario::load(a.scenario.as_deref())?;
    let pool = PoolFile::load(&a.pool)?;
    let spec = load_grid(&a.grid)?;
    let mut sampling = spec.sampling;
    sampling.teams = a.teams.unwrap_or(sampling.teams);
    sampling.opponents_per_team = a.opponents.unwrap_or(sampling.opponents_per_team);
    sampling.repetitions = a.repetitions.unwrap_or(sampling.repetitions);
    if sampling.teams == 0 || sampling.opponents_per_team == 0 || sampling.repetitions == 0 {
        return Err(HarnessError::Config("sampling counts must be positive".into()));
    }
    let mut experiment = Experiment::new(scenario.domain, pool.pool, a.seed)?;
    let rows = experiment.run_cells(&spec.cells(), &sampling, a.jobs as usize)?;
    write_atomic(&a.out, |w| write_rows(w, &rows))?;
    eprintln!("teamneg: wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}

fn summarize_cmd(a: SummarizeArgs) -> Result<()> {
    let rows = read_rows(&a.input)?;
    if rows.is_empty() {
        return Err(HarnessError::EmptyInput(a.input));
    }
    let summaries = summarize(&rows, a.grouping);
    let tables = render_tables(&summaries, a.grouping);
    write_atomic(&a.out, |w| write_summary_csv(w, &summaries))?;
    match &a.tables {
        Some(path) => write_atomic(path, |w| w.write_all(tables.as_bytes()).map_err(|e| HarnessError::io(path, e))),
        None => {
            print!("{tables}");
            Ok(())
        }
    }
}

fn trace(a: TraceArgs) -> Result<()> {
    if a.team_size == 0 || a.team_size > MAX_TEAM_SIZE {
        return Err(HarnessError::Config(format!("team size {} outside [1, {MAX_TEAM_SIZE}]", a.team_size)));
    }
    let scenario = Scenario::load(a.scenario.as_deref())?;
    let pool = PoolFile::load(&a.pool)?;
    if a.opp_idx >= pool.pool.len() {
        return Err(HarnessError::Config(format!("opponent index {} outside the pool", a.opp_idx)));
    }
    let experiment = Experiment::new(scenario.domain, pool.pool, a.seed)?;
    let key = NegotiationKey {
        cell: ExperimentCell {
            similarity: a.similarity,
            team_deadline: a.team_deadline,
            opp_deadline: a.opp_deadline,
            team_size: a.team_size,
            strategy: a.strategy,
            team_beta: a.team_beta,
            opp_beta: a.opp_beta,
        },
        team_idx: a.team_idx,
        opp_idx: a.opp_idx,
        repetition: a.repetition,
    };
    let (_, outcome) = experiment.replay(&key, a.opponents)?;
    let mut out = std::io::stdout().lock();
    out.write_all(to_jsonl(&outcome.trace).as_bytes())
        .map_err(|e| HarnessError::io("<stdout>", e))
}

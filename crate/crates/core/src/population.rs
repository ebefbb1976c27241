//! Utility-profile pools, team dissimilarity and class-conditioned team sampling.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{Domain, UtilityProfile};
use crate::error::{Error, Result};

pub const POOL_SIZE: usize = 25;
pub const DISSIMILARITY_SAMPLES: usize = 1000;
pub const STAT_SUBSETS: usize = 10_000;
pub const ATTEMPT_BUDGET: usize = 1_000_000;
pub const MAX_RESERVATION: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePool {
    #[serde(rename = "member")]
    member_profiles: Vec<UtilityProfile>,
    #[serde(rename = "opponent")]
    opponent_profiles: Vec<UtilityProfile>,
}

impl ProfilePool {
    /// Opponent `k` is the reversal of member `k`.
    pub fn from_members(member_profiles: Vec<UtilityProfile>) -> Result<Self> {
        if member_profiles.is_empty() {
            return Err(Error::InvalidProfile("empty profile pool".into()));
        }
        let opponent_profiles = member_profiles
            .iter()
            .map(|p| p.reversed(p.reservation()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            member_profiles,
            opponent_profiles,
        })
    }

    pub fn members(&self) -> &[UtilityProfile] {
        &self.member_profiles
    }

    pub fn opponents(&self) -> &[UtilityProfile] {
        &self.opponent_profiles
    }

    pub fn len(&self) -> usize {
        self.member_profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.member_profiles.is_empty()
    }

    /// Reads `[[member]]` and `[[opponent]]` tables. Every profile is
    /// revalidated and the opponents must be the members' reversals.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: ProfilePool = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let revalidate = |p: &UtilityProfile| {
            UtilityProfile::new(p.weights().to_vec(), p.kinds().to_vec(), p.reservation())
        };
        let members = raw.member_profiles.iter().map(revalidate).collect::<Result<Vec<_>>>()?;
        let opponents = raw.opponent_profiles.iter().map(revalidate).collect::<Result<Vec<_>>>()?;
        let pool = Self::from_members(members)?;
        if opponents.len() != pool.opponent_profiles.len() {
            return Err(Error::InvalidProfile(format!(
                "{} opponents for {} members",
                opponents.len(),
                pool.len()
            )));
        }
        for (k, (got, want)) in opponents.iter().zip(&pool.opponent_profiles).enumerate() {
            let same_weights = got
                .weights()
                .iter()
                .zip(want.weights())
                .all(|(a, b)| (a - b).abs() <= 1e-12);
            if !same_weights || got.kinds() != want.kinds() {
                return Err(Error::InvalidProfile(format!(
                    "opponent {k} is not the reversal of member {k}"
                )));
            }
        }
        Ok(pool)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("profile pools serialize")
    }

    /// Every profile must match the domain's size and team orientation.
    pub fn check_domain(&self, domain: &Domain) -> Result<()> {
        let kinds = domain.team_orientations();
        for (k, p) in self.member_profiles.iter().enumerate() {
            if p.kinds() != kinds.as_slice() {
                return Err(Error::InvalidProfile(format!(
                    "member profile {k} does not match the domain"
                )));
            }
        }
        Ok(())
    }
}

/// `POOL_SIZE` member profiles with weights uniform on the simplex.
pub fn generate_pool(domain: &Domain, rng: &mut impl Rng) -> ProfilePool {
    let members = (0..POOL_SIZE)
        .map(|_| {
            let weights = simplex_weights(domain.len(), rng);
            UtilityProfile::for_team(domain, weights, 0.0).expect("normalized weights form a valid profile")
        })
        .collect();
    ProfilePool::from_members(members).expect("generated pool is nonempty")
}

fn simplex_weights(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let draws: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = draws.iter().sum();
    if total <= 0.0 {
        return vec![1.0 / n as f64; n];
    }
    let mut weights: Vec<f64> = draws.iter().map(|d| d / total).collect();
    // Keep the sum at one to the last bit.
    let drift = 1.0 - weights.iter().sum::<f64>();
    let largest = (0..n).max_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap();
    weights[largest] += drift;
    weights
}

/// Uniform random offers in the unit cube.
pub fn sample_offers(n: usize, samples: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    (0..samples)
        .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Mean absolute utility difference over a fixed sample of offers.
pub fn pair_dissimilarity_on(u1: &UtilityProfile, u2: &UtilityProfile, offers: &[Vec<f64>]) -> f64 {
    assert!(!offers.is_empty(), "no sample offers");
    let total: f64 = offers
        .iter()
        .map(|x| (u1.utility(x) - u2.utility(x)).abs())
        .sum();
    total / offers.len() as f64
}

pub fn pair_dissimilarity(u1: &UtilityProfile, u2: &UtilityProfile, samples: usize, rng: &mut impl Rng) -> f64 {
    assert_eq!(u1.len(), u2.len(), "profiles over different domains");
    let offers = sample_offers(u1.len(), samples, rng);
    pair_dissimilarity_on(u1, u2, &offers)
}

/// Mean pairwise dissimilarity of a team, all pairs sharing one sample.
pub fn team_dissimilarity(team: &[UtilityProfile], samples: usize, rng: &mut impl Rng) -> f64 {
    assert!(team.len() >= 2, "team dissimilarity needs at least two members");
    let offers = sample_offers(team[0].len(), samples, rng);
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..team.len() {
        for j in i + 1..team.len() {
            total += pair_dissimilarity_on(&team[i], &team[j], &offers);
            pairs += 1;
        }
    }
    total / pairs as f64
}

/// Pairwise dissimilarities of a pool, estimated once on a shared offer sample.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityMatrix {
    size: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    pub fn estimate(profiles: &[UtilityProfile], samples: usize, rng: &mut impl Rng) -> Self {
        let size = profiles.len();
        let n = profiles.first().map_or(0, UtilityProfile::len);
        let offers = sample_offers(n, samples, rng);
        let mut values = vec![0.0; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let d = pair_dissimilarity_on(&profiles[i], &profiles[j], &offers);
                values[i * size + j] = d;
                values[j * size + i] = d;
            }
        }
        Self { size, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn team(&self, members: &[usize]) -> f64 {
        assert!(members.len() >= 2, "team dissimilarity needs at least two members");
        let mut total = 0.0;
        let mut pairs = 0usize;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                total += self.get(i, j);
                pairs += 1;
            }
        }
        total / pairs as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityClass {
    VerySimilar,
    VeryDissimilar,
}

impl SimilarityClass {
    pub const ALL: [SimilarityClass; 2] = [SimilarityClass::VerySimilar, SimilarityClass::VeryDissimilar];

    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityClass::VerySimilar => "very_similar",
            SimilarityClass::VeryDissimilar => "very_dissimilar",
        }
    }
}

impl fmt::Display for SimilarityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "very_similar" => Ok(SimilarityClass::VerySimilar),
            "very_dissimilar" => Ok(SimilarityClass::VeryDissimilar),
            other => Err(Error::Parse(format!("unknown similarity class `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeamClassStats {
    pub mean: f64,
    pub stddev: f64,
    pub threshold_similar: f64,
    pub threshold_dissimilar: f64,
}

impl TeamClassStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        assert!(samples.len() >= 2, "need at least two samples");
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let stddev = var.sqrt();
        Self {
            mean,
            stddev,
            threshold_similar: mean - 1.5 * stddev,
            threshold_dissimilar: mean + 1.5 * stddev,
        }
    }

    pub fn admits(&self, class: SimilarityClass, dissimilarity: f64) -> bool {
        match class {
            SimilarityClass::VerySimilar => dissimilarity <= self.threshold_similar,
            SimilarityClass::VeryDissimilar => dissimilarity >= self.threshold_dissimilar,
        }
    }
}

/// Sorted random subset of `0..pool_size`.
fn random_team(pool_size: usize, team_size: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut team = rand::seq::index::sample(rng, pool_size, team_size).into_vec();
    team.sort_unstable();
    team
}

/// Estimate the dissimilarity distribution of size-`team_size` subsets, then
/// rejection-sample `count` distinct teams from the requested class.
pub fn classify_and_sample_teams(
    matrix: &DissimilarityMatrix,
    team_size: usize,
    class: SimilarityClass,
    count: usize,
    rng: &mut impl Rng,
) -> Result<(TeamClassStats, Vec<Vec<usize>>)> {
    let pool_size = matrix.size();
    if team_size < 2 || team_size > pool_size {
        return Err(Error::InvalidConfig(format!(
            "team size {team_size} must lie in [2, {pool_size}] for similarity classes"
        )));
    }
    let samples: Vec<f64> = (0..STAT_SUBSETS)
        .map(|_| matrix.team(&random_team(pool_size, team_size, rng)))
        .collect();
    let stats = TeamClassStats::from_samples(&samples);

    let mut seen = BTreeSet::new();
    let mut teams = Vec::with_capacity(count);
    let mut attempts = 0;
    while teams.len() < count {
        if attempts == ATTEMPT_BUDGET {
            return Err(Error::TeamGeneration {
                class: class.to_string(),
                team_size,
                requested: count,
                found: teams.len(),
                attempts,
            });
        }
        attempts += 1;
        let team = random_team(pool_size, team_size, rng);
        if stats.admits(class, matrix.team(&team)) && seen.insert(team.clone()) {
            teams.push(team);
        }
    }
    Ok((stats, teams))
}

/// Teams for one class and size, stored for reuse across runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Roster {
    pub class: SimilarityClass,
    pub team_size: usize,
    pub stats: TeamClassStats,
    pub teams: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RosterFile {
    #[serde(default, rename = "roster")]
    pub rosters: Vec<Roster>,
}

impl RosterFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("rosters serialize")
    }

    pub fn find(&self, class: SimilarityClass, team_size: usize) -> Option<&Roster> {
        self.rosters
            .iter()
            .find(|r| r.class == class && r.team_size == team_size)
    }
}

pub fn draw_reservation(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.0..=MAX_RESERVATION)
}

/// Splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent substream seed for a key path under `base`.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(base), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

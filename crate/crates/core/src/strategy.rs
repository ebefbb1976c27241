//! Intra-team strategies and the alternating-offers negotiation loop.
//!
//! The team always opens. Each round the team builds one offer according to
//! its strategy, the opponent accepts, withdraws or counters, and on a
//! counter the team decides whether to accept. A round is one team offer plus
//! the opponent's response.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::{Member, Opponent, OpponentResponse};
use crate::domain::{Domain, Offer, Orientation, PartialOffer};
use crate::error::{Error, Result};
use crate::trace::{Actor, EventKind, TraceEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    /// A single representative negotiates with its own preferences.
    RE,
    /// Plurality vote on member proposals, majority vote on acceptance.
    SSV,
    /// Borda count on member proposals, unanimity on acceptance.
    SBV,
    /// Mediated attribute-by-attribute construction, unanimity on acceptance.
    FUM,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::RE, Strategy::SSV, Strategy::SBV, Strategy::FUM];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::RE => "RE",
            Strategy::SSV => "SSV",
            Strategy::SBV => "SBV",
            Strategy::FUM => "FUM",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RE" => Ok(Strategy::RE),
            "SSV" => Ok(Strategy::SSV),
            "SBV" => Ok(Strategy::SBV),
            "FUM" => Ok(Strategy::FUM),
            other => Err(Error::Parse(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NegotiationConfig {
    domain: Domain,
    team: Vec<Member>,
    opponent: Opponent,
    strategy: Strategy,
    team_deadline: u32,
    team_beta: f64,
    seed: u64,
    record_trace: bool,
}

impl NegotiationConfig {
    /// Team deadline and concession speed are read from the members, which
    /// must all agree on them.
    pub fn new(
        domain: Domain,
        team: Vec<Member>,
        opponent: Opponent,
        strategy: Strategy,
        seed: u64,
    ) -> Result<Self> {
        let first = team
            .first()
            .ok_or_else(|| Error::InvalidConfig("the team needs at least one member".into()))?;
        let team_deadline = first.params().deadline;
        let team_beta = first.params().beta;
        let n = domain.len();
        let orientations = domain.team_orientations();
        for m in &team {
            if m.params().deadline != team_deadline || m.params().beta != team_beta {
                return Err(Error::InvalidConfig(
                    "team members must share deadline and concession speed".into(),
                ));
            }
            if m.profile().len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: m.profile().len(),
                });
            }
            if m.profile().kinds() != orientations.as_slice() {
                return Err(Error::InvalidConfig(format!(
                    "member {:?} does not follow the team orientation",
                    m.id()
                )));
            }
        }
        let flipped: Vec<Orientation> = orientations.iter().map(|o| o.flip()).collect();
        if opponent.profile().kinds() != flipped.as_slice() {
            return Err(Error::InvalidConfig(
                "opponent valuations must be the reverse of the team's".into(),
            ));
        }
        Ok(Self {
            domain,
            team,
            opponent,
            strategy,
            team_deadline,
            team_beta,
            seed,
            record_trace: true,
        })
    }

    /// Disable event recording for bulk runs.
    pub fn with_trace(mut self, record: bool) -> Self {
        self.record_trace = record;
        self
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn team(&self) -> &[Member] {
        &self.team
    }

    pub fn opponent(&self) -> &Opponent {
        &self.opponent
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn team_deadline(&self) -> u32 {
        self.team_deadline
    }

    pub fn team_beta(&self) -> f64 {
        self.team_beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AgreementByOpponentAccept,
    AgreementByTeamAccept,
    FailureTeamDeadline,
    FailureOpponentWithdraw,
}

impl Status {
    pub fn is_success(self) -> bool {
        matches!(
            self,
            Status::AgreementByOpponentAccept | Status::AgreementByTeamAccept
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::AgreementByOpponentAccept => "agreement_by_opponent_accept",
            Status::AgreementByTeamAccept => "agreement_by_team_accept",
            Status::FailureTeamDeadline => "failure_team_deadline",
            Status::FailureOpponentWithdraw => "failure_opponent_withdraw",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Status::AgreementByOpponentAccept,
            Status::AgreementByTeamAccept,
            Status::FailureTeamDeadline,
            Status::FailureOpponentWithdraw,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
        .ok_or_else(|| Error::Parse(format!("unknown status `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegotiationOutcome {
    pub status: Status,
    pub agreement: Option<Offer>,
    pub rounds: u32,
    pub member_utilities: Vec<f64>,
    pub opponent_utility: f64,
    pub trace: Vec<TraceEvent>,
}

/// Attribute order for mediated construction, least important to the
/// opponent first.
#[derive(Clone, Debug, PartialEq)]
pub struct Agenda {
    pub order: Vec<usize>,
    pub concession_totals: Vec<f64>,
}

/// Infer the agenda from the first `k` observed opponent offers: attributes
/// on which the opponent conceded most come first. With nothing observed the
/// order is a random permutation.
pub fn build_agenda(observed: &[Offer], opponent_best: &Offer, k: usize, rng: &mut impl Rng) -> Agenda {
    let n = opponent_best.len();
    let used = &observed[..observed.len().min(k)];
    if used.is_empty() {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        return Agenda {
            order,
            concession_totals: vec![0.0; n],
        };
    }
    let best = opponent_best.values();
    let mut totals = vec![0.0; n];
    for offer in used {
        for (j, (x, b)) in offer.values().iter().zip(best).enumerate() {
            totals[j] += (x - b).abs();
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| totals[b].total_cmp(&totals[a]).then(a.cmp(&b)));
    Agenda {
        order,
        concession_totals: totals,
    }
}

/// Index of the proposal with the most support; ties are broken uniformly at
/// random. `votes[i][j]` is member `i`'s vote for proposal `j`.
pub fn ssv_select(votes: &[Vec<u32>], rng: &mut impl Rng) -> usize {
    most_supported(votes, rng)
}

/// Borda winner; same counting and tie rule as [`ssv_select`].
pub fn sbv_select(scores: &[Vec<u32>], rng: &mut impl Rng) -> usize {
    debug_assert!(scores.iter().all(|s| is_permutation(s)));
    most_supported(scores, rng)
}

fn is_permutation(scores: &[u32]) -> bool {
    let mut sorted = scores.to_vec();
    sorted.sort_unstable();
    sorted.iter().enumerate().all(|(i, &s)| s as usize == i)
}

fn most_supported(votes: &[Vec<u32>], rng: &mut impl Rng) -> usize {
    let k = votes.first().map_or(0, Vec::len);
    assert!(k > 0, "no proposals to select from");
    let mut totals = vec![0u64; k];
    for row in votes {
        debug_assert_eq!(row.len(), k);
        for (total, &v) in totals.iter_mut().zip(row) {
            *total += u64::from(v);
        }
    }
    let top = *totals.iter().max().unwrap();
    let tied: Vec<usize> = (0..k).filter(|&j| totals[j] == top).collect();
    if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.random_range(0..tied.len())]
    }
}

/// Strict majority accepts, strict minority rejects, an exact tie is a coin flip.
pub fn ssv_accept(votes: &[bool], rng: &mut impl Rng) -> bool {
    let yes = votes.iter().filter(|v| **v).count();
    let m = votes.len();
    match (2 * yes).cmp(&m) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => rng.random_bool(0.5),
    }
}

pub fn unanimity_accept(votes: &[bool]) -> bool {
    votes.iter().all(|v| *v)
}

/// Representative's offer: closest offer to the last opponent offer at the
/// representative's current aspiration.
pub fn re_build_offer(representative: &Member, t: u32, last_op_offer: Option<&Offer>) -> Offer {
    let reference = match last_op_offer {
        Some(o) => o.clone(),
        None => representative.default_opponent_reference(),
    };
    crate::iso::iso_offer(representative.profile(), representative.aspiration(t), &reference)
}

/// Build an offer attribute by attribute so that every member's utility
/// reaches its aspiration at round `t`.
pub fn fum_build_offer(domain: &Domain, team: &[Member], agenda: &Agenda, t: u32) -> Offer {
    fum_build(domain, team, agenda, t, &mut Recorder::off())
}

fn fum_build(domain: &Domain, team: &[Member], agenda: &Agenda, t: u32, rec: &mut Recorder) -> Offer {
    let n = domain.len();
    let opponent_best = domain.opponent_best();
    let orientations = domain.team_orientations();
    let mut partial = PartialOffer::empty(n);

    for j in 0..n {
        if team.iter().all(|m| m.ni_set().contains(&j)) {
            partial.set(j, opponent_best.values()[j]);
            rec.push(|| {
                TraceEvent::new(t, Actor::Mediator, EventKind::AttributeSet)
                    .with_attribute(j)
                    .with_offer(&[opponent_best.values()[j]])
            });
        }
    }

    let mut active = vec![true; team.len()];
    for &j in &agenda.order {
        if partial.is_set(j) {
            continue;
        }
        let bids = team
            .iter()
            .zip(&active)
            .filter(|(m, &on)| on && !m.ni_set().contains(&j))
            .map(|(m, _)| m.value_bid(j, &partial, t));
        let value = match orientations[j] {
            Orientation::Increasing => bids.fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x)))),
            Orientation::Decreasing => bids.fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x)))),
        };
        let Some(value) = value else {
            continue;
        };
        partial.set(j, value);
        rec.push(|| {
            TraceEvent::new(t, Actor::Mediator, EventKind::AttributeSet)
                .with_attribute(j)
                .with_offer(&[value])
        });
        for (m, on) in team.iter().zip(active.iter_mut()) {
            if *on && m.partial_accept(&partial, t) {
                *on = false;
            }
        }
        if active.iter().all(|on| !on) {
            break;
        }
    }
    partial.complete_with(&opponent_best)
}

/// Acceptance of an opponent offer received at round `t`. Returns the team
/// decision and the individual votes.
pub fn strategy_accept(
    strategy: Strategy,
    team: &[Member],
    representative: usize,
    offer: &Offer,
    t: u32,
    rng: &mut impl Rng,
) -> (bool, Vec<bool>) {
    match strategy {
        Strategy::RE => {
            let vote = team[representative].accept_opponent(offer, t);
            (vote, vec![vote])
        }
        Strategy::SSV => {
            let votes: Vec<bool> = team.iter().map(|m| m.accept_opponent(offer, t)).collect();
            (ssv_accept(&votes, rng), votes)
        }
        Strategy::SBV | Strategy::FUM => {
            let votes: Vec<bool> = team.iter().map(|m| m.accept_opponent(offer, t)).collect();
            (unanimity_accept(&votes), votes)
        }
    }
}

struct Recorder {
    events: Option<Vec<TraceEvent>>,
}

impl Recorder {
    fn off() -> Self {
        Self { events: None }
    }

    fn on() -> Self {
        Self {
            events: Some(Vec::new()),
        }
    }

    fn push(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(events) = &mut self.events {
            events.push(event());
        }
    }

    fn finish(self) -> Vec<TraceEvent> {
        self.events.unwrap_or_default()
    }
}

fn votes_u32(votes: &[bool]) -> Vec<u32> {
    votes.iter().map(|&v| u32::from(v)).collect()
}

struct Team<'a> {
    config: &'a NegotiationConfig,
    representative: usize,
    observed: Vec<Offer>,
    last_op_offer: Option<Offer>,
    last_team_offer: Option<Offer>,
    agenda_window: usize,
}

impl Team<'_> {
    fn propose(&mut self, t: u32, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Offer {
        let config = self.config;
        let team = config.team.as_slice();
        match config.strategy {
            Strategy::RE => re_build_offer(&team[self.representative], t, self.last_op_offer.as_ref()),
            Strategy::SSV | Strategy::SBV => {
                let proposals: Vec<Offer> = team
                    .iter()
                    .map(|m| m.propose(t, self.last_op_offer.as_ref(), self.last_team_offer.as_ref()))
                    .collect();
                for (i, p) in proposals.iter().enumerate() {
                    rec.push(|| {
                        TraceEvent::new(t, Actor::Member(i), EventKind::MemberProposal).with_offer(p.values())
                    });
                }
                let votes: Vec<Vec<u32>> = if config.strategy == Strategy::SSV {
                    team.iter().map(|m| m.vote_binary(&proposals, t)).collect()
                } else {
                    team.iter().map(|m| m.vote_borda(&proposals)).collect()
                };
                for (i, v) in votes.iter().enumerate() {
                    rec.push(|| TraceEvent::new(t, Actor::Member(i), EventKind::ProposalVotes).with_votes(v.clone()));
                }
                let winner = if config.strategy == Strategy::SSV {
                    ssv_select(&votes, rng)
                } else {
                    sbv_select(&votes, rng)
                };
                proposals.into_iter().nth(winner).expect("winner indexes a proposal")
            }
            Strategy::FUM => {
                let agenda = build_agenda(
                    &self.observed,
                    &config.domain.opponent_best(),
                    self.agenda_window,
                    rng,
                );
                rec.push(|| {
                    TraceEvent::new(t, Actor::Mediator, EventKind::Agenda)
                        .with_votes(agenda.order.iter().map(|&j| j as u32).collect())
                });
                fum_build(&config.domain, team, &agenda, t, rec)
            }
        }
    }
}

pub fn run_negotiation(config: &NegotiationConfig) -> NegotiationOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rec = if config.record_trace {
        Recorder::on()
    } else {
        Recorder::off()
    };
    let team = config.team.as_slice();
    let opponent = &config.opponent;

    let representative = if config.strategy == Strategy::RE {
        let idx = rng.random_range(0..team.len());
        rec.push(|| TraceEvent::new(0, Actor::Team, EventKind::Representative).with_votes(vec![idx as u32]));
        idx
    } else {
        0
    };
    if config.strategy == Strategy::FUM {
        for (i, m) in team.iter().enumerate() {
            rec.push(|| {
                TraceEvent::new(0, Actor::Member(i), EventKind::HandOver)
                    .with_votes(m.ni_set().iter().map(|&j| j as u32).collect())
            });
        }
    }

    let mut state = Team {
        config,
        representative,
        observed: Vec::new(),
        last_op_offer: None,
        last_team_offer: None,
        agenda_window: (config.team_deadline / 4) as usize,
    };

    let finish = |status: Status, agreement: Option<Offer>, rounds: u32, rec: Recorder| {
        let (member_utilities, opponent_utility) = match &agreement {
            Some(offer) => (
                team.iter().map(|m| m.utility(offer)).collect(),
                opponent.utility(offer),
            ),
            None => (vec![0.0; team.len()], 0.0),
        };
        NegotiationOutcome {
            status,
            agreement,
            rounds,
            member_utilities,
            opponent_utility,
            trace: rec.finish(),
        }
    };

    for t in 0..=config.team_deadline {
        let offer = state.propose(t, &mut rng, &mut rec);
        rec.push(|| TraceEvent::new(t, Actor::Team, EventKind::TeamOffer).with_offer(offer.values()));
        match opponent.respond(&offer, t) {
            OpponentResponse::Withdraw => {
                rec.push(|| TraceEvent::new(t, Actor::Opponent, EventKind::OpponentWithdraw));
                return finish(Status::FailureOpponentWithdraw, None, t + 1, rec);
            }
            OpponentResponse::Accept => {
                rec.push(|| TraceEvent::new(t, Actor::Opponent, EventKind::OpponentAccept));
                return finish(Status::AgreementByOpponentAccept, Some(offer), t + 1, rec);
            }
            OpponentResponse::Counter(counter) => {
                rec.push(|| {
                    TraceEvent::new(t, Actor::Opponent, EventKind::OpponentCounter).with_offer(counter.values())
                });
                let (accepted, votes) =
                    strategy_accept(config.strategy, team, representative, &counter, t, &mut rng);
                rec.push(|| TraceEvent::new(t, Actor::Team, EventKind::AcceptanceVotes).with_votes(votes_u32(&votes)));
                if accepted {
                    rec.push(|| TraceEvent::new(t, Actor::Team, EventKind::TeamAccept));
                    return finish(Status::AgreementByTeamAccept, Some(counter), t + 1, rec);
                }
                rec.push(|| TraceEvent::new(t, Actor::Team, EventKind::TeamReject));
                state.observed.push(counter.clone());
                state.last_op_offer = Some(counter);
                state.last_team_offer = Some(offer);
            }
        }
    }
    rec.push(|| TraceEvent::new(config.team_deadline, Actor::Team, EventKind::TeamWithdraw));
    finish(Status::FailureTeamDeadline, None, config.team_deadline + 1, rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concession::ConcessionParams;
    use crate::domain::{Orientation::*, UtilityProfile};
    use crate::agents::MemberId;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    fn offer(v: &[f64]) -> Offer {
        Offer::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ssv_selection_examples() {
        let votes = vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 1, 1]];
        assert_eq!(ssv_select(&votes, &mut rng()), 1);
        assert_eq!(ssv_select(&[vec![1]], &mut rng()), 0);
        let own_only: Vec<Vec<u32>> = (0..4).map(|i| (0..4).map(|j| u32::from(i == j)).collect()).collect();
        let mut r = rng();
        let mut seen = [false; 4];
        for _ in 0..200 {
            seen[ssv_select(&own_only, &mut r)] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn ssv_acceptance_examples() {
        let mut r = rng();
        assert!(ssv_accept(&[true, true, true, false], &mut r));
        assert!(!ssv_accept(&[true, true, false, false, false], &mut r));
        let accepted = (0..10_000)
            .filter(|_| ssv_accept(&[true, true, false, false], &mut r))
            .count();
        assert!((accepted as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn sbv_selection_examples() {
        assert_eq!(sbv_select(&[vec![0, 1], vec![0, 1]], &mut rng()), 1);
        assert_eq!(sbv_select(&[vec![0]], &mut rng()), 0);
        let mut r = rng();
        let picks: Vec<usize> = (0..100).map(|_| sbv_select(&[vec![0, 1], vec![1, 0]], &mut r)).collect();
        assert!(picks.contains(&0) && picks.contains(&1));
    }

    #[test]
    fn unanimity_examples() {
        assert!(unanimity_accept(&[true; 4]));
        assert!(!unanimity_accept(&[true, true, true, false]));
        assert!(unanimity_accept(&[true]));
    }

    #[test]
    fn agenda_examples() {
        let best = offer(&[1.0, 1.0]);
        let agenda = build_agenda(&[offer(&[1.0, 0.8]), offer(&[0.9, 0.6])], &best, 5, &mut rng());
        assert_eq!(agenda.order, vec![1, 0]);
        assert!((agenda.concession_totals[0] - 0.1).abs() < 1e-12);
        assert!((agenda.concession_totals[1] - 0.6).abs() < 1e-12);

        let equal = build_agenda(&[offer(&[0.5, 0.5])], &best, 5, &mut rng());
        assert_eq!(equal.order, vec![0, 1]);

        // Only the first k offers count.
        let windowed = build_agenda(&[offer(&[1.0, 0.8]), offer(&[0.0, 1.0])], &best, 1, &mut rng());
        assert_eq!(windowed.order, vec![1, 0]);

        let a = build_agenda(&[], &offer(&[0.0; 6]), 3, &mut rng());
        let b = build_agenda(&[], &offer(&[0.0; 6]), 3, &mut rng());
        assert_eq!(a, b);
        let mut sorted = a.order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..6).collect::<Vec<_>>());
    }

    fn member(id: usize, weights: &[f64], ru: f64, deadline: u32, beta: f64) -> Member {
        let profile = UtilityProfile::new(weights.to_vec(), vec![Increasing; weights.len()], ru).unwrap();
        Member::new(MemberId(id), profile, ConcessionParams::new(ru, deadline, beta, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn fum_single_member_fills_agenda_in_order() {
        let domain = Domain::uniform(3, Increasing).unwrap();
        let m = member(0, &[0.5, 0.3, 0.2], 0.0, 10, 1.0);
        let agenda = Agenda {
            order: vec![2, 0, 1],
            concession_totals: vec![0.0; 3],
        };
        // s(5) = 0.5: attr 2 -> 1.0 (0.2), attr 0 -> gap 0.3 / 0.5 = 0.6, done.
        let o = fum_build_offer(&domain, std::slice::from_ref(&m), &agenda, 5);
        assert!((o.values()[2] - 1.0).abs() < 1e-12);
        assert!((o.values()[0] - 0.6).abs() < 1e-12);
        assert_eq!(o.values()[1], 0.0);
        assert!((m.utility(&o) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fum_all_satisfied_members_yield_opponent_best() {
        let domain = Domain::uniform(3, Increasing).unwrap();
        let team: Vec<Member> = (0..3).map(|i| member(i, &[0.2, 0.3, 0.5], 0.0, 10, 1.0)).collect();
        let agenda = Agenda {
            order: vec![0, 1, 2],
            concession_totals: vec![0.0; 3],
        };
        let o = fum_build_offer(&domain, &team, &agenda, 10);
        assert_eq!(o, domain.opponent_best());
    }

    #[test]
    fn accept_dispatch() {
        let team = vec![
            member(0, &[1.0, 0.0], 0.0, 10, 1.0),
            member(1, &[0.0, 1.0], 0.0, 10, 1.0),
            member(2, &[0.5, 0.5], 0.0, 10, 1.0),
        ];
        let mut r = rng();
        // Demand at t + 1 = 1 is 0.9.
        let lone = offer(&[1.0, 0.0]);
        assert_eq!(strategy_accept(Strategy::RE, &team, 0, &lone, 0, &mut r), (true, vec![true]));
        assert_eq!(strategy_accept(Strategy::RE, &team, 1, &lone, 0, &mut r), (false, vec![false]));
        assert!(!strategy_accept(Strategy::SSV, &team, 0, &lone, 0, &mut r).0);

        let two_of_three = offer(&[1.0, 0.85]);
        let (ssv, votes) = strategy_accept(Strategy::SSV, &team, 0, &two_of_three, 0, &mut r);
        assert!(ssv);
        assert_eq!(votes, vec![true, false, true]);
        assert!(!strategy_accept(Strategy::SBV, &team, 0, &two_of_three, 0, &mut r).0);
        assert!(!strategy_accept(Strategy::FUM, &team, 0, &two_of_three, 0, &mut r).0);
        assert!(strategy_accept(Strategy::FUM, &team, 0, &offer(&[1.0, 1.0]), 0, &mut r).0);
    }

    #[test]
    fn opponent_without_time_withdraws_in_first_round() {
        let domain = Domain::uniform(2, Increasing).unwrap();
        let team = vec![member(0, &[0.5, 0.5], 0.1, 10, 1.0)];
        let op_profile = UtilityProfile::new(vec![0.5, 0.5], vec![Decreasing; 2], 0.1).unwrap();
        let opponent = Opponent::new(op_profile, ConcessionParams::new(0.1, 0, 1.0, 0.0).unwrap()).unwrap();
        let config = NegotiationConfig::new(domain, team, opponent, Strategy::SSV, 1).unwrap();
        let out = run_negotiation(&config);
        assert_eq!(out.status, Status::FailureOpponentWithdraw);
        assert_eq!(out.rounds, 1);
        assert!(out.agreement.is_none());
        assert_eq!(out.member_utilities, vec![0.0]);
    }

    #[test]
    fn config_validation() {
        let domain = Domain::uniform(2, Increasing).unwrap();
        let op_profile = UtilityProfile::new(vec![0.5, 0.5], vec![Decreasing; 2], 0.1).unwrap();
        let opponent = Opponent::new(op_profile, ConcessionParams::new(0.1, 10, 1.0, 0.0).unwrap()).unwrap();
        assert!(NegotiationConfig::new(domain.clone(), vec![], opponent.clone(), Strategy::RE, 0).is_err());
        let mixed = vec![member(0, &[0.5, 0.5], 0.1, 10, 1.0), member(1, &[0.5, 0.5], 0.1, 12, 1.0)];
        assert!(NegotiationConfig::new(domain.clone(), mixed, opponent.clone(), Strategy::RE, 0).is_err());
        let wrong_op = Opponent::new(
            UtilityProfile::new(vec![0.5, 0.5], vec![Increasing; 2], 0.1).unwrap(),
            ConcessionParams::new(0.1, 10, 1.0, 0.0).unwrap(),
        )
        .unwrap();
        assert!(NegotiationConfig::new(domain, vec![member(0, &[0.5, 0.5], 0.1, 10, 1.0)], wrong_op, Strategy::RE, 0).is_err());
    }

    #[test]
    fn names_roundtrip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
        }
        for st in [
            Status::AgreementByOpponentAccept,
            Status::AgreementByTeamAccept,
            Status::FailureTeamDeadline,
            Status::FailureOpponentWithdraw,
        ] {
            assert_eq!(st.as_str().parse::<Status>().unwrap(), st);
        }
    }
}

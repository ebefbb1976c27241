//! Decision rules of the opponent and of individual team members.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::concession::ConcessionParams;
use crate::domain::{Offer, PartialOffer, UtilityProfile};
use crate::error::{Error, Result};
use crate::iso::{iso_offer, iso_offer_dual};

/// Slack for `utility >= aspiration` comparisons; iso-set searches hit their
/// target only up to rounding.
pub const UTILITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum OpponentResponse {
    Accept,
    Counter(Offer),
    Withdraw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Opponent {
    profile: UtilityProfile,
    params: ConcessionParams,
}

impl Opponent {
    pub fn new(profile: UtilityProfile, params: ConcessionParams) -> Result<Self> {
        if params.epsilon != 0.0 {
            return Err(Error::InvalidParams("opponents do not hand over utility".into()));
        }
        if (profile.reservation() - params.reservation).abs() > 1e-12 {
            return Err(Error::InvalidParams(
                "profile and concession reservation utilities differ".into(),
            ));
        }
        Ok(Self { profile, params })
    }

    pub fn profile(&self) -> &UtilityProfile {
        &self.profile
    }

    pub fn params(&self) -> &ConcessionParams {
        &self.params
    }

    pub fn utility(&self, offer: &Offer) -> f64 {
        self.profile.utility(offer.values())
    }

    /// Withdraw at the deadline, accept when the offer is worth at least the
    /// next round's demand, otherwise counter with the offer closest to the
    /// incoming one at the current demand.
    pub fn respond(&self, incoming: &Offer, t: u32) -> OpponentResponse {
        if t >= self.params.deadline {
            return OpponentResponse::Withdraw;
        }
        let next = self.params.aspiration(t + 1);
        if self.utility(incoming) >= next - UTILITY_TOLERANCE {
            return OpponentResponse::Accept;
        }
        OpponentResponse::Counter(iso_offer(
            &self.profile,
            self.params.aspiration(t),
            incoming,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    id: MemberId,
    profile: UtilityProfile,
    params: ConcessionParams,
    ni_set: BTreeSet<usize>,
}

impl Member {
    /// Builds a member and derives its handed-over attributes from `params.epsilon`.
    pub fn new(id: MemberId, profile: UtilityProfile, params: ConcessionParams) -> Result<Self> {
        if (profile.reservation() - params.reservation).abs() > 1e-12 {
            return Err(Error::InvalidParams(
                "profile and concession reservation utilities differ".into(),
            ));
        }
        let ni_set = select_ni(&profile, params.epsilon);
        Ok(Self {
            id,
            profile,
            params,
            ni_set,
        })
    }

    pub fn id(&self) -> MemberId {
        self.id
    }

    pub fn profile(&self) -> &UtilityProfile {
        &self.profile
    }

    pub fn params(&self) -> &ConcessionParams {
        &self.params
    }

    pub fn ni_set(&self) -> &BTreeSet<usize> {
        &self.ni_set
    }

    pub fn aspiration(&self, t: u32) -> f64 {
        self.params.aspiration(t)
    }

    pub fn utility(&self, offer: &Offer) -> f64 {
        self.profile.utility(offer.values())
    }

    /// The opponent's presumed ideal: the worst offer for this member.
    pub fn default_opponent_reference(&self) -> Offer {
        self.profile
            .reversed(0.0)
            .expect("reversal keeps a valid profile")
            .ideal_offer()
    }

    /// Proposal at the current aspiration, traded off between the last
    /// opponent offer and the last offer the team sent.
    pub fn propose(&self, t: u32, last_op_offer: Option<&Offer>, last_team_offer: Option<&Offer>) -> Offer {
        let op_default;
        let primary = match last_op_offer {
            Some(o) => o,
            None => {
                op_default = self.default_opponent_reference();
                &op_default
            }
        };
        let team_default;
        let secondary = match last_team_offer {
            Some(o) => o,
            None => {
                team_default = self.profile.ideal_offer();
                &team_default
            }
        };
        iso_offer_dual(&self.profile, self.aspiration(t), primary, secondary)
    }

    pub fn vote_binary(&self, proposals: &[Offer], t: u32) -> Vec<u32> {
        let s = self.aspiration(t);
        proposals
            .iter()
            .map(|p| u32::from(self.utility(p) >= s - UTILITY_TOLERANCE))
            .collect()
    }

    /// Borda scores: position in the ascending utility ranking, minus one.
    pub fn vote_borda(&self, proposals: &[Offer]) -> Vec<u32> {
        let utilities: Vec<f64> = proposals.iter().map(|p| self.utility(p)).collect();
        borda_scores(&utilities)
    }

    /// Accept an opponent offer received at round `t` if it is worth the
    /// demand of round `t + 1`; at the deadline round the demand stays at the
    /// reservation utility.
    pub fn accept_opponent(&self, offer: &Offer, t: u32) -> bool {
        self.utility(offer) >= self.params.aspiration_clamped(t + 1) - UTILITY_TOLERANCE
    }

    /// Value to demand for `attr` given the partial offer built so far.
    pub fn value_bid(&self, attr: usize, partial: &PartialOffer, t: u32) -> f64 {
        let weight = self.profile.weights()[attr];
        let kind = self.profile.kinds()[attr];
        let gap = self.aspiration(t) - self.profile.partial_utility(partial);
        let needed = if gap <= 0.0 || weight <= 0.0 {
            0.0
        } else {
            (gap / weight).clamp(0.0, 1.0)
        };
        kind.inverse(needed)
    }

    pub fn partial_accept(&self, partial: &PartialOffer, t: u32) -> bool {
        self.profile.partial_utility(partial) >= self.aspiration(t) - UTILITY_TOLERANCE
    }
}

/// Scores for one voter: ascending sort by utility, ties by index.
pub fn borda_scores(utilities: &[f64]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..utilities.len()).collect();
    order.sort_by(|&a, &b| utilities[a].total_cmp(&utilities[b]).then(a.cmp(&b)));
    let mut scores = vec![0; utilities.len()];
    for (position, idx) in order.into_iter().enumerate() {
        scores[idx] = position as u32;
    }
    scores
}

/// Largest prefix of the attributes, in ascending weight order, whose total
/// weight stays within `epsilon`.
pub fn select_ni(profile: &UtilityProfile, epsilon: f64) -> BTreeSet<usize> {
    let weights = profile.weights();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    let mut total = 0.0;
    let mut set = BTreeSet::new();
    for j in order {
        if total + weights[j] > epsilon + 1e-12 {
            break;
        }
        total += weights[j];
        set.insert(j);
    }
    set
}

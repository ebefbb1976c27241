//! Protocol event records, serialized one JSON object per line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Actor {
    Team,
    Mediator,
    Member(usize),
    Opponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// `votes` holds the representative's index.
    Representative,
    /// `votes` holds the attributes a member hands over.
    HandOver,
    /// `votes` holds the attribute order for this round.
    Agenda,
    MemberProposal,
    ProposalVotes,
    AttributeSet,
    TeamOffer,
    OpponentAccept,
    OpponentCounter,
    OpponentWithdraw,
    AcceptanceVotes,
    TeamAccept,
    TeamReject,
    TeamWithdraw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub round: u32,
    pub actor: Actor,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offer: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub votes: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<usize>,
}

impl TraceEvent {
    pub fn new(round: u32, actor: Actor, kind: EventKind) -> Self {
        Self {
            round,
            actor,
            kind,
            offer: None,
            votes: None,
            attribute: None,
        }
    }

    pub fn with_offer(mut self, offer: &[f64]) -> Self {
        self.offer = Some(offer.to_vec());
        self
    }

    pub fn with_votes(mut self, votes: Vec<u32>) -> Self {
        self.votes = Some(votes);
        self
    }

    pub fn with_attribute(mut self, attribute: usize) -> Self {
        self.attribute = Some(attribute);
        self
    }
}

pub fn to_jsonl(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for event in events {
        out.push_str(&serde_json::to_string(event).expect("trace events serialize"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<TraceEvent>> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| Error::Parse(format!("trace line {}: {e}", i + 1)))
        })
        .collect()
}

//! Deterministic simulation of negotiations between an agent team and a
//! single opponent over continuous multi-attribute offers.

pub mod agents;
pub mod concession;
pub mod domain;
pub mod error;
pub mod iso;
pub mod population;
pub mod strategy;
pub mod trace;

pub use agents::{Member, MemberId, Opponent, OpponentResponse, UTILITY_TOLERANCE};
pub use concession::{BetaClass, ConcessionParams, DeadlineClass};
pub use domain::{AttributeSpec, Domain, Offer, Orientation, PartialOffer, UtilityProfile};
pub use error::{Error, Result};
pub use iso::{iso_offer, iso_offer_dual, similarity};
pub use population::{ProfilePool, SimilarityClass, TeamClassStats};
pub use strategy::{run_negotiation, NegotiationConfig, NegotiationOutcome, Status, Strategy};
pub use trace::TraceEvent;

//! Time-dependent concession tactics and the environment classes used to
//! sample concession speeds and deadlines.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcessionParams {
    pub reservation: f64,
    pub deadline: u32,
    pub beta: f64,
    /// Utility handed over before negotiating; zero outside the mediated strategy.
    pub epsilon: f64,
}

impl ConcessionParams {
    pub fn new(reservation: f64, deadline: u32, beta: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reservation) {
            return Err(Error::InvalidParams(format!(
                "reservation {reservation} outside [0,1]"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {beta}")));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidParams(format!("epsilon {epsilon} outside [0,1]")));
        }
        if 1.0 - epsilon < reservation {
            return Err(Error::InvalidParams(format!(
                "empty aspiration range: 1 - epsilon = {} < reservation {reservation}",
                1.0 - epsilon
            )));
        }
        Ok(Self {
            reservation,
            deadline,
            beta,
            epsilon,
        })
    }

    /// Utility demanded at round `t`:
    /// `(1-eps) - (1-eps-RU) * (t/T)^(1/beta)`.
    ///
    /// Panics if `t > deadline`. A zero deadline demands the reservation
    /// utility straight away.
    pub fn aspiration(&self, t: u32) -> f64 {
        assert!(
            t <= self.deadline,
            "round {t} is past the deadline {}",
            self.deadline
        );
        let top = 1.0 - self.epsilon;
        if self.deadline == 0 || t == self.deadline {
            return self.reservation;
        }
        if t == 0 {
            return top;
        }
        let progress = (t as f64 / self.deadline as f64).powf(1.0 / self.beta);
        let s = top - (top - self.reservation) * progress;
        s.clamp(self.reservation, top)
    }

    /// Aspiration with rounds past the deadline pinned at the deadline level.
    pub fn aspiration_clamped(&self, t: u32) -> f64 {
        self.aspiration(t.min(self.deadline))
    }
}

/// Concession speed classes: very boulware, boulware, conceder, very conceder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BetaClass {
    VB,
    B,
    C,
    VC,
}

impl BetaClass {
    pub const ALL: [BetaClass; 4] = [BetaClass::VB, BetaClass::B, BetaClass::C, BetaClass::VC];

    pub fn range(self) -> (f64, f64) {
        match self {
            BetaClass::VB => (0.1, 0.49),
            BetaClass::B => (0.5, 0.99),
            BetaClass::C => (1.0, 10.0),
            BetaClass::VC => (11.0, 40.0),
        }
    }

    pub fn sample(self, rng: &mut impl Rng) -> f64 {
        let (lo, hi) = self.range();
        rng.random_range(lo..=hi)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BetaClass::VB => "VB",
            BetaClass::B => "B",
            BetaClass::C => "C",
            BetaClass::VC => "VC",
        }
    }
}

/// Deadline classes: short, medium, long.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeadlineClass {
    S,
    M,
    L,
}

impl DeadlineClass {
    pub const ALL: [DeadlineClass; 3] = [DeadlineClass::S, DeadlineClass::M, DeadlineClass::L];

    pub fn range(self) -> (u32, u32) {
        match self {
            DeadlineClass::S => (5, 10),
            DeadlineClass::M => (11, 29),
            DeadlineClass::L => (30, 60),
        }
    }

    pub fn sample(self, rng: &mut impl Rng) -> u32 {
        let (lo, hi) = self.range();
        rng.random_range(lo..=hi)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeadlineClass::S => "S",
            DeadlineClass::M => "M",
            DeadlineClass::L => "L",
        }
    }
}

impl fmt::Display for BetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for DeadlineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BetaClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "VB" => Ok(BetaClass::VB),
            "B" => Ok(BetaClass::B),
            "C" => Ok(BetaClass::C),
            "VC" => Ok(BetaClass::VC),
            other => Err(Error::Parse(format!("unknown beta class `{other}`"))),
        }
    }
}

impl FromStr for DeadlineClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" => Ok(DeadlineClass::S),
            "M" => Ok(DeadlineClass::M),
            "L" => Ok(DeadlineClass::L),
            other => Err(Error::Parse(format!("unknown deadline class `{other}`"))),
        }
    }
}

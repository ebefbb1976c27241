//! Negotiation domains, offers and linear additive utility profiles.
//!
//! Every offer is stored in the normalized space `[0,1]^n`. Natural units
//! (dollars, days, percent) only appear when a [`Domain`] normalizes or
//! denormalizes values at an I/O boundary.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of a monotone valuation function on the normalized axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Increasing,
    Decreasing,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Increasing => Orientation::Decreasing,
            Orientation::Decreasing => Orientation::Increasing,
        }
    }

    /// Valuation `V(x)`: `x` when increasing, `1 - x` when decreasing.
    #[inline]
    pub fn value(self, x: f64) -> f64 {
        match self {
            Orientation::Increasing => x,
            Orientation::Decreasing => 1.0 - x,
        }
    }

    /// Attribute value that yields valuation `v`. The map is an involution.
    #[inline]
    pub fn inverse(self, v: f64) -> f64 {
        self.value(v)
    }

    /// Attribute value with valuation 1.
    #[inline]
    pub fn best(self) -> f64 {
        self.inverse(1.0)
    }

    /// Attribute value with valuation 0.
    #[inline]
    pub fn worst(self) -> f64 {
        self.inverse(0.0)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Increasing => f.write_str("increasing"),
            Orientation::Decreasing => f.write_str("decreasing"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    /// Direction of every team member's valuation. Opponents use the flip.
    pub team_orientation: Orientation,
}

impl AttributeSpec {
    pub fn new(name: impl Into<String>, min: f64, max: f64, team_orientation: Orientation) -> Self {
        Self {
            name: name.into(),
            min,
            max,
            team_orientation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Domain {
    #[serde(rename = "attribute")]
    attributes: Vec<AttributeSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    #[serde(rename = "attribute")]
    attributes: Vec<AttributeSpec>,
}

impl Domain {
    pub fn new(attributes: Vec<AttributeSpec>) -> Result<Self> {
        if attributes.is_empty() {
            return Err(Error::InvalidDomain("a domain needs at least one attribute".into()));
        }
        let mut seen = HashSet::new();
        for attr in &attributes {
            if !(attr.min.is_finite() && attr.max.is_finite()) || attr.min >= attr.max {
                return Err(Error::InvalidDomain(format!(
                    "attribute `{}` needs finite min < max, got [{}, {}]",
                    attr.name, attr.min, attr.max
                )));
            }
            if !seen.insert(attr.name.as_str()) {
                return Err(Error::InvalidDomain(format!(
                    "duplicate attribute name `{}`",
                    attr.name
                )));
            }
        }
        Ok(Self { attributes })
    }

    /// Hotel group booking: price per person, cancellation fee, full payment
    /// deadline and bar discount.
    pub fn group_booking() -> Self {
        use Orientation::*;
        Self::new(vec![
            AttributeSpec::new("pp", 210.0, 700.0, Decreasing),
            AttributeSpec::new("cf", 0.0, 150.0, Decreasing),
            AttributeSpec::new("pd", 0.0, 30.0, Increasing),
            AttributeSpec::new("db", 0.0, 20.0, Increasing),
        ])
        .expect("built-in scenario is valid")
    }

    /// Build a domain with `n` unnamed attributes sharing one orientation.
    pub fn uniform(n: usize, orientation: Orientation) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|j| AttributeSpec::new(format!("a{j}"), 0.0, 1.0, orientation))
                .collect(),
        )
    }

    /// Parse a scenario document. Unknown keys and orientations are rejected.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: DomainFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(file.attributes)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("domain serializes")
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn team_orientations(&self) -> Vec<Orientation> {
        self.attributes.iter().map(|a| a.team_orientation).collect()
    }

    /// Offer that is best for any opponent of the team (team valuation 0 everywhere).
    pub fn opponent_best(&self) -> Offer {
        Offer(self.attributes.iter().map(|a| a.team_orientation.worst()).collect())
    }

    pub fn normalize(&self, natural: &[f64]) -> Result<Offer> {
        self.check_len(natural.len())?;
        let values = self
            .attributes
            .iter()
            .zip(natural)
            .map(|(attr, &x)| {
                if !(attr.min..=attr.max).contains(&x) {
                    return Err(Error::OutOfRange {
                        attribute: attr.name.clone(),
                        value: x,
                        min: attr.min,
                        max: attr.max,
                    });
                }
                Ok(((x - attr.min) / (attr.max - attr.min)).clamp(0.0, 1.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Offer(values))
    }

    pub fn denormalize(&self, offer: &Offer) -> Result<Vec<f64>> {
        self.check_len(offer.len())?;
        Ok(self
            .attributes
            .iter()
            .zip(offer.values())
            .map(|(attr, &x)| attr.min + x * (attr.max - attr.min))
            .collect())
    }

    fn check_len(&self, actual: usize) -> Result<()> {
        if actual != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual,
            });
        }
        Ok(())
    }
}

/// A complete offer in normalized attribute space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Offer(Vec<f64>);

impl Offer {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidOffer("an offer needs at least one value".into()));
        }
        if let Some(x) = values.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidOffer(format!("value {x} outside [0,1]")));
        }
        Ok(Self(values))
    }

    /// Clamps each value into `[0,1]`; for results of floating point searches.
    pub(crate) fn from_clamped(values: Vec<f64>) -> Self {
        Self(values.into_iter().map(|x| x.clamp(0.0, 1.0)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }
}

/// An offer under construction: `None` marks attributes not yet set.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialOffer(Vec<Option<f64>>);

impl PartialOffer {
    pub fn empty(n: usize) -> Self {
        Self(vec![None; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, attr: usize) -> Option<f64> {
        self.0[attr]
    }

    pub fn is_set(&self, attr: usize) -> bool {
        self.0[attr].is_some()
    }

    pub fn set(&mut self, attr: usize, value: f64) {
        self.0[attr] = Some(value.clamp(0.0, 1.0));
    }

    pub fn is_complete(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    /// Fill every unset attribute with `fallback` and return the complete offer.
    pub fn complete_with(&self, fallback: &Offer) -> Offer {
        Offer(
            self.0
                .iter()
                .zip(fallback.values())
                .map(|(v, &f)| v.unwrap_or(f))
                .collect(),
        )
    }

    pub fn slots(&self) -> &[Option<f64>] {
        &self.0
    }
}

impl From<&Offer> for PartialOffer {
    fn from(offer: &Offer) -> Self {
        Self(offer.values().iter().copied().map(Some).collect())
    }
}

/// Linear additive utility with monotone linear valuations and a private
/// reservation utility.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilityProfile {
    weights: Vec<f64>,
    kinds: Vec<Orientation>,
    reservation: f64,
}

impl UtilityProfile {
    pub fn new(weights: Vec<f64>, kinds: Vec<Orientation>, reservation: f64) -> Result<Self> {
        if weights.is_empty() || weights.len() != kinds.len() {
            return Err(Error::InvalidProfile(format!(
                "{} weights but {} valuation kinds",
                weights.len(),
                kinds.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidProfile("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProfile(format!("weights sum to {total}, expected 1")));
        }
        if !(0.0..=1.0).contains(&reservation) {
            return Err(Error::InvalidProfile(format!(
                "reservation utility {reservation} outside [0,1]"
            )));
        }
        Ok(Self {
            weights,
            kinds,
            reservation,
        })
    }

    /// Profile of a team member whose valuations follow the domain orientation.
    pub fn for_team(domain: &Domain, weights: Vec<f64>, reservation: f64) -> Result<Self> {
        Self::new(weights, domain.team_orientations(), reservation)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kinds(&self) -> &[Orientation] {
        &self.kinds
    }

    pub fn reservation(&self) -> f64 {
        self.reservation
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn with_reservation(&self, reservation: f64) -> Result<Self> {
        Self::new(self.weights.clone(), self.kinds.clone(), reservation)
    }

    pub fn evaluate(&self, offer: &Offer) -> Result<f64> {
        if offer.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: offer.len(),
            });
        }
        Ok(self.utility(offer.values()))
    }

    /// Unchecked evaluation on raw normalized values.
    #[inline]
    pub fn utility(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.weights
            .iter()
            .zip(&self.kinds)
            .zip(values)
            .map(|((w, k), &x)| w * k.value(x))
            .sum()
    }

    /// Utility of a partial offer; unset attributes contribute nothing.
    pub fn partial_utility(&self, partial: &PartialOffer) -> f64 {
        debug_assert_eq!(partial.len(), self.len());
        self.weights
            .iter()
            .zip(&self.kinds)
            .zip(partial.slots())
            .filter_map(|((w, k), x)| x.map(|x| w * k.value(x)))
            .sum()
    }

    pub fn ideal_offer(&self) -> Offer {
        Offer(self.kinds.iter().map(|k| k.best()).collect())
    }

    /// Same weights, flipped valuation kinds, the given reservation utility.
    pub fn reversed(&self, reservation: f64) -> Result<Self> {
        Self::new(
            self.weights.clone(),
            self.kinds.iter().map(|k| k.flip()).collect(),
            reservation,
        )
    }

    /// Map an offer into this profile's valuation space.
    pub(crate) fn to_valuations(&self, values: &[f64]) -> Vec<f64> {
        self.kinds.iter().zip(values).map(|(k, &x)| k.value(x)).collect()
    }

    pub(crate) fn offer_from_valuations(&self, valuations: &[f64]) -> Offer {
        Offer::from_clamped(
            self.kinds
                .iter()
                .zip(valuations)
                .map(|(k, &v)| k.inverse(v))
                .collect(),
        )
    }
}

//! Scalar reputation baselines: vote sum, positive ratio, star tiers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::{InvalidVote, LegacyVote};

fn check_votes(votes: &[i64]) -> Result<(), InvalidVote> {
    match votes.iter().find(|v| !(-1..=1).contains(*v)) {
        Some(&bad) => Err(InvalidVote(bad)),
        None => Ok(()),
    }
}

pub fn votes_as_points(votes: &[LegacyVote]) -> Vec<i64> {
    votes.iter().map(|v| v.points()).collect()
}

pub fn accumulative_score(votes: &[i64]) -> Result<i64, InvalidVote> {
    check_votes(votes)?;
    Ok(votes.iter().sum())
}

/// Share of `+1` votes; 0 for an empty list.
pub fn ratio_score(votes: &[i64]) -> Result<f64, InvalidVote> {
    check_votes(votes)?;
    if votes.is_empty() {
        return Ok(0.0);
    }
    let positive = votes.iter().filter(|&&v| v == 1).count();
    Ok(positive as f64 / votes.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarColor {
    None,
    Yellow,
    Blue,
    Turquoise,
    Purple,
    Red,
    Green,
}

impl StarColor {
    pub fn name(self) -> &'static str {
        match self {
            StarColor::None => "none",
            StarColor::Yellow => "yellow",
            StarColor::Blue => "blue",
            StarColor::Turquoise => "turquoise",
            StarColor::Purple => "purple",
            StarColor::Red => "red",
            StarColor::Green => "green",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarTier {
    pub name: StarColor,
    pub threshold: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarTiersError {
    #[error("star thresholds must be strictly increasing ({prev} then {next})")]
    NotIncreasing { prev: i64, next: i64 },
}

/// Star tiers ordered by strictly increasing threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct StarTiers(Vec<StarTier>);

impl StarTiers {
    pub fn new(tiers: Vec<StarTier>) -> Result<Self, StarTiersError> {
        for pair in tiers.windows(2) {
            if pair[1].threshold <= pair[0].threshold {
                return Err(StarTiersError::NotIncreasing {
                    prev: pair[0].threshold,
                    next: pair[1].threshold,
                });
            }
        }
        Ok(Self(tiers))
    }

    pub fn tiers(&self) -> &[StarTier] {
        &self.0
    }
}

impl Default for StarTiers {
    fn default() -> Self {
        let t = |name, threshold| StarTier { name, threshold };
        Self(vec![
            t(StarColor::Yellow, 10),
            t(StarColor::Blue, 50),
            t(StarColor::Turquoise, 100),
            t(StarColor::Purple, 500),
            t(StarColor::Red, 1000),
            t(StarColor::Green, 5000),
        ])
    }
}

impl<'de> Deserialize<'de> for StarTiers {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let tiers = Vec::<StarTier>::deserialize(d)?;
        StarTiers::new(tiers).map_err(serde::de::Error::custom)
    }
}

/// Highest tier whose threshold is at most `points`.
pub fn star_tier(points: i64, tiers: &StarTiers) -> StarColor {
    tiers
        .0
        .iter()
        .rev()
        .find(|t| t.threshold <= points)
        .map_or(StarColor::None, |t| t.name)
}

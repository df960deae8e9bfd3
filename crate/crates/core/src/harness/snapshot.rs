use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ledger::FeedbackLedger;
use crate::trust::{
    accumulative_score, experience_score, optimal_price_weight, ratio_score, rater_weight, star_tier,
    time_component, trust_value, votes_as_points, HistoryStats, StarColor, StarTiers, TrustError,
    TrustReport, WeightMode,
};
use crate::types::UserId;

use super::run::RunResult;

/// Scalar reputation of a user as a seller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub accumulative: i64,
    pub ratio: f64,
    pub star: StarColor,
}

pub fn baselines(ledger: &FeedbackLedger, user: &UserId, tiers: &StarTiers) -> BaselineReport {
    let points = votes_as_points(&ledger.votes_for(user));
    // Points built from LegacyVote are always valid.
    let accumulative = accumulative_score(&points).expect("legacy votes are in range");
    BaselineReport {
        accumulative,
        ratio: ratio_score(&points).expect("legacy votes are in range"),
        star: star_tier(accumulative, tiers),
    }
}

/// The non-weight factors of the trust exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustFactors {
    pub optimal_price_weight: f64,
    pub time_component: f64,
    pub experience: f64,
}

impl TrustFactors {
    /// All factors at 1, so the trust value depends on the weight alone.
    pub fn neutral() -> Self {
        Self {
            optimal_price_weight: 1.0,
            time_component: 1.0,
            experience: 1.0,
        }
    }

    /// Realized price against the run's forecast, plus the history terms.
    pub fn from_run(run: &RunResult, history: &HistoryStats) -> Result<Self, TrustError> {
        let price = run.final_price().map_or(0.0, |p| p.as_f64());
        Ok(Self {
            optimal_price_weight: optimal_price_weight(price, run.optimal_price_realized)?,
            time_component: time_component(history),
            experience: experience_score(history.auctions_participated(), history.auctions_won())?,
        })
    }
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("{0} does not appear in the ledger")]
    UnknownUser(UserId),
    #[error("{user} has no rater with overlapping sellers")]
    NoPeer { user: UserId, baselines: BaselineReport },
    #[error(transparent)]
    Trust(#[from] TrustError),
}

/// Full trust report for `user`. `mode` picks which weight enters the
/// exponent; both are reported.
pub fn trust_snapshot(
    ledger: &FeedbackLedger,
    user: &UserId,
    factors: &TrustFactors,
    mode: WeightMode,
    tiers: &StarTiers,
) -> Result<TrustReport, SnapshotError> {
    if !ledger.contains_user(user) {
        return Err(SnapshotError::UnknownUser(user.clone()));
    }
    let raw = match rater_weight(user, ledger, WeightMode::Raw) {
        Ok(w) => w,
        Err(TrustError::NoPeer(_)) => {
            return Err(SnapshotError::NoPeer {
                user: user.clone(),
                baselines: baselines(ledger, user, tiers),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let normalized = raw / ledger.config().scale_max();
    let w = match mode {
        WeightMode::Raw => raw,
        WeightMode::Normalized => normalized,
    };
    Ok(TrustReport {
        rater_weight: raw,
        rater_weight_normalized: normalized,
        optimal_price_weight: factors.optimal_price_weight,
        time_component: factors.time_component,
        experience: factors.experience,
        trust_value: trust_value(w, factors.optimal_price_weight, factors.time_component, factors.experience),
    })
}

//! Time decay, experience, and the exponential trust value.

use serde::{Deserialize, Serialize};

use super::TrustError;

/// Seller history feeding the time component and experience.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryStats {
    prior_feedback: f64,
    days_since_last: f64,
    auctions_participated: u32,
    auctions_won: u32,
}

impl HistoryStats {
    /// `days_since_last` is clamped up to 1.
    pub fn new(
        prior_feedback: f64,
        days_since_last: f64,
        auctions_participated: u32,
        auctions_won: u32,
    ) -> Result<Self, TrustError> {
        if !(0.0..=1.0).contains(&prior_feedback) {
            return Err(TrustError::InvalidParams(format!(
                "prior feedback must lie in [0, 1], got {prior_feedback}"
            )));
        }
        if days_since_last.is_nan() {
            return Err(TrustError::InvalidParams("days_since_last is NaN".into()));
        }
        if auctions_won > auctions_participated {
            return Err(TrustError::WonExceedsParticipated {
                participated: auctions_participated,
                won: auctions_won,
            });
        }
        Ok(Self {
            prior_feedback,
            days_since_last: days_since_last.max(1.0),
            auctions_participated,
            auctions_won,
        })
    }

    pub fn prior_feedback(&self) -> f64 {
        self.prior_feedback
    }

    pub fn days_since_last(&self) -> f64 {
        self.days_since_last
    }

    pub fn auctions_participated(&self) -> u32 {
        self.auctions_participated
    }

    pub fn auctions_won(&self) -> u32 {
        self.auctions_won
    }
}

/// `f - f / days_since_last`: feedback carried over from the previous
/// auction, discounted when auctions are close together.
pub fn time_component(h: &HistoryStats) -> f64 {
    h.prior_feedback - h.prior_feedback / h.days_since_last
}

/// Win ratio damped by `1 - exp(-participated / 10)`.
pub fn experience_score(participated: u32, won: u32) -> Result<f64, TrustError> {
    if won > participated {
        return Err(TrustError::WonExceedsParticipated { participated, won });
    }
    if participated == 0 {
        return Ok(0.0);
    }
    let ratio = won as f64 / participated as f64;
    Ok(ratio * (1.0 - (-(participated as f64) / 10.0).exp()))
}

pub fn trust_value(weight: f64, optimal_price_weight: f64, time_component: f64, experience: f64) -> f64 {
    (weight * optimal_price_weight * time_component * experience).exp()
}

/// The four trust factors and the resulting value for one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrustReport {
    pub rater_weight: f64,
    pub rater_weight_normalized: f64,
    pub optimal_price_weight: f64,
    pub time_component: f64,
    pub experience: f64,
    pub trust_value: f64,
}

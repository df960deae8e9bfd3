//! Trust computation: rater weights from rating similarity, the optimal-price
//! forecast, time decay, experience, and the exponential trust value, plus
//! the accumulative/ratio/star baselines.

mod baseline;
mod factors;
mod price;
mod weight;

pub use baseline::{
    accumulative_score, ratio_score, star_tier, votes_as_points, StarColor, StarTier, StarTiers,
    StarTiersError,
};
pub use factors::{experience_score, time_component, trust_value, HistoryStats, TrustReport};
pub use price::{expected_optimal_price, optimal_price, optimal_price_weight, OptimalPriceParams};
pub use weight::{pair_similarity, rater_weight, rater_weight_detail, similarity, RaterWeight, WeightMode};

use thiserror::Error;

use crate::ledger::{InvalidVote, LedgerError};
use crate::types::UserId;

#[derive(Debug, Error)]
pub enum TrustError {
    #[error("no ratings from {rater} for {seller}")]
    MissingRatings { rater: UserId, seller: UserId },
    #[error("rating vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("both rating sums are zero for seller {seller}")]
    ZeroDenominator { seller: UserId },
    #[error("{0} has no rater with overlapping sellers")]
    NoPeer(UserId),
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("won ({won}) exceeds participated ({participated})")]
    WonExceedsParticipated { participated: u32, won: u32 },
    #[error("optimal price must be positive, got {0}")]
    NonPositiveOptimal(f64),
    #[error(transparent)]
    InvalidVote(#[from] InvalidVote),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

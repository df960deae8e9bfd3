//! Seeded experiment runner: builds auctions and bidder populations from a
//! [`ScenarioConfig`], runs matched agent/manual arms, writes post-auction
//! feedback into per-arm ledgers, and reports CSV summaries and trust
//! snapshots.
//!
//! Every random quantity comes from its own sub-stream of the run seed, so
//! the two arms of a pair share valuations, poll order and price noise:
//!
//! | stream | use |
//! |---|---|
//! | 1 | bidder thresholds |
//! | 2 | poll order |
//! | 3 | optimal-price noise |
//! | 4 | feedback ratings |
//! | 100 + i | attendance and submission draws of bidder `i` |

mod config;
mod experiment;
mod report;
mod run;
mod snapshot;

pub use config::{load_config, parse_config, BidderSpec, ConfigError, ScenarioConfig, SellerSpec, ThresholdSpec};
pub use experiment::{run_experiment, ArmSummary, ExperimentReport, ExperimentSummary};
pub use report::{simulate_to_dir, write_runs_csv, write_summary_csv, RUNS_HEADER, SUMMARY_HEADER};
pub use run::{post_auction_feedback, run_arm, run_auction, Arm, FeedbackModel, RunResult};
pub use snapshot::{baselines, trust_snapshot, BaselineReport, SnapshotError, TrustFactors};

use thiserror::Error;

use crate::ledger::LedgerError;
use crate::protocols::AuctionError;
use crate::trust::TrustError;

pub(crate) const STREAM_VALUATION: u64 = 1;
pub(crate) const STREAM_POLL: u64 = 2;
pub(crate) const STREAM_PRICE_NOISE: u64 = 3;
pub(crate) const STREAM_FEEDBACK: u64 = 4;
pub(crate) const STREAM_BIDDER_BASE: u64 = 100;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    ConfigInvalid(#[from] ConfigError),
    #[error("auction closed without a sale")]
    NoSale,
    #[error("replications must be at least 1")]
    NoReplications,
    #[error(transparent)]
    Auction(#[from] AuctionError),
    #[error(transparent)]
    Trust(#[from] TrustError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

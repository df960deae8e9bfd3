//! Online-auction simulator with a weight-value trust model.
//!
//! * [`ledger`]: two-tier feedback store and the set queries behind rater
//!   similarity.
//! * [`trust`]: rater weight, optimal price, time decay, experience, trust
//!   value, and the scalar reputation baselines.
//! * [`protocols`]: English, Dutch and Vickrey state machines.
//! * [`agents`]: proxy and manual bidder strategies.
//! * [`harness`]: seeded matched-pair experiments, feedback generation,
//!   trust snapshots, CSV reports.

pub mod agents;
pub mod fixtures;
pub mod harness;
pub mod ledger;
pub mod protocols;
pub mod rng;
pub mod stats;
pub mod trust;
pub mod types;

pub use types::{Money, Tick, UserId};

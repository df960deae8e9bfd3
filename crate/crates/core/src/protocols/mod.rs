//! Tick-driven English, Dutch and Vickrey auction state machines.

mod dutch;
mod english;
mod vickrey;

pub use dutch::DutchAuction;
pub use english::EnglishAuction;
pub use vickrey::{SealedBid, VickreyAuction};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Money, Tick, UserId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    English,
    Dutch,
    Vickrey,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::English => "english",
            Protocol::Dutch => "dutch",
            Protocol::Vickrey => "vickrey",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bid {
    pub tick: Tick,
    pub bidder: UserId,
    pub amount: Money,
}

impl Bid {
    pub fn new(tick: Tick, bidder: UserId, amount: Money) -> Self {
        Self {
            tick,
            bidder,
            amount,
        }
    }
}

/// Result of a closed auction. `price` is meaningful only when there is a
/// winner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuctionOutcome {
    pub winner: Option<UserId>,
    pub price: Money,
    pub closing_tick: Tick,
}

impl AuctionOutcome {
    pub fn no_sale(closing_tick: Tick) -> Self {
        Self {
            winner: None,
            price: Money::ZERO,
            closing_tick,
        }
    }

    pub fn is_sale(&self) -> bool {
        self.winner.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuctionError {
    #[error("bid {offered} below minimum {minimum}")]
    BelowMinimum { minimum: Money, offered: Money },
    #[error("{0} already holds the high bid")]
    SelfOutbid(UserId),
    #[error("tick {tick} is after the deadline {deadline}")]
    AfterDeadline { tick: Tick, deadline: Tick },
    #[error("auction still open at tick {tick} (deadline {deadline})")]
    NotYetClosed { tick: Tick, deadline: Tick },
    #[error("item already sold")]
    AlreadySold,
    #[error("bid amount {0} is negative")]
    NegativeBid(Money),
    #[error("invalid auction parameters: {0}")]
    InvalidParams(String),
}

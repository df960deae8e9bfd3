use crate::types::{Money, Tick, UserId};

use super::{AuctionError, AuctionOutcome, Bid};

/// Ascending open-cry auction with a hard deadline. The first bid may equal
/// the start price; each later bid must beat the standing bid by at least
/// the increment, and the leader cannot raise itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnglishAuction {
    start_price: Money,
    increment: Money,
    deadline_tick: Tick,
    history: Vec<Bid>,
}

impl EnglishAuction {
    pub fn new(start_price: Money, increment: Money, deadline_tick: Tick) -> Result<Self, AuctionError> {
        if increment <= Money::ZERO {
            return Err(AuctionError::InvalidParams("increment must be positive".into()));
        }
        if start_price < Money::ZERO {
            return Err(AuctionError::InvalidParams("start price must be non-negative".into()));
        }
        Ok(Self {
            start_price,
            increment,
            deadline_tick,
            history: Vec::new(),
        })
    }

    pub fn start_price(&self) -> Money {
        self.start_price
    }

    pub fn increment(&self) -> Money {
        self.increment
    }

    pub fn deadline_tick(&self) -> Tick {
        self.deadline_tick
    }

    pub fn history(&self) -> &[Bid] {
        &self.history
    }

    pub fn high_bid(&self) -> Option<Money> {
        self.history.last().map(|b| b.amount)
    }

    pub fn leader(&self) -> Option<&UserId> {
        self.history.last().map(|b| &b.bidder)
    }

    /// Smallest amount the next bid must reach.
    pub fn minimum_bid(&self) -> Money {
        match self.high_bid() {
            Some(high) => high + self.increment,
            None => self.start_price,
        }
    }

    /// Accepts `bid` or rejects it leaving the state untouched.
    pub fn apply(&mut self, bid: Bid) -> Result<(), AuctionError> {
        if bid.tick > self.deadline_tick {
            return Err(AuctionError::AfterDeadline {
                tick: bid.tick,
                deadline: self.deadline_tick,
            });
        }
        if self.leader() == Some(&bid.bidder) {
            return Err(AuctionError::SelfOutbid(bid.bidder));
        }
        let minimum = self.minimum_bid();
        if bid.amount < minimum {
            return Err(AuctionError::BelowMinimum {
                minimum,
                offered: bid.amount,
            });
        }
        self.history.push(bid);
        Ok(())
    }

    /// Closes the auction once `now` is past the deadline. The leader wins at
    /// its own bid.
    pub fn close(&self, now: Tick) -> Result<AuctionOutcome, AuctionError> {
        if now <= self.deadline_tick {
            return Err(AuctionError::NotYetClosed {
                tick: now,
                deadline: self.deadline_tick,
            });
        }
        Ok(match self.history.last() {
            Some(last) => AuctionOutcome {
                winner: Some(last.bidder.clone()),
                price: last.amount,
                closing_tick: self.deadline_tick,
            },
            None => AuctionOutcome::no_sale(self.deadline_tick),
        })
    }
}

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::types::{Money, Tick, UserId};

use super::{AuctionError, AuctionOutcome, Bid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SealedBid {
    pub amount: Money,
    pub submission_tick: Tick,
}

/// Sealed-bid second-price auction.
///
/// The highest bid at or above the reserve wins; ties go to the earlier
/// submission, then to the smaller bidder id. The winner pays the larger of
/// the second-highest bid and the reserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VickreyAuction {
    deadline_tick: Tick,
    reserve: Money,
    sealed_bids: BTreeMap<UserId, SealedBid>,
}

impl VickreyAuction {
    pub fn new(deadline_tick: Tick, reserve: Money) -> Result<Self, AuctionError> {
        if reserve < Money::ZERO {
            return Err(AuctionError::InvalidParams("reserve must be non-negative".into()));
        }
        Ok(Self {
            deadline_tick,
            reserve,
            sealed_bids: BTreeMap::new(),
        })
    }

    pub fn deadline_tick(&self) -> Tick {
        self.deadline_tick
    }

    pub fn sealed_bids(&self) -> &BTreeMap<UserId, SealedBid> {
        &self.sealed_bids
    }

    /// Stores a bid; a resubmission replaces the bidder's earlier one.
    pub fn submit(&mut self, bid: Bid) -> Result<(), AuctionError> {
        if bid.tick > self.deadline_tick {
            return Err(AuctionError::AfterDeadline {
                tick: bid.tick,
                deadline: self.deadline_tick,
            });
        }
        if bid.amount < Money::ZERO {
            return Err(AuctionError::NegativeBid(bid.amount));
        }
        self.sealed_bids.insert(
            bid.bidder,
            SealedBid {
                amount: bid.amount,
                submission_tick: bid.tick,
            },
        );
        Ok(())
    }

    pub fn close(&self, now: Tick) -> Result<AuctionOutcome, AuctionError> {
        if now <= self.deadline_tick {
            return Err(AuctionError::NotYetClosed {
                tick: now,
                deadline: self.deadline_tick,
            });
        }
        let mut ranked: Vec<(&UserId, &SealedBid)> = self.sealed_bids.iter().collect();
        ranked.sort_by_key(|(id, b)| (Reverse(b.amount), b.submission_tick, *id));

        let Some((winner, top)) = ranked.first() else {
            return Ok(AuctionOutcome::no_sale(self.deadline_tick));
        };
        if top.amount < self.reserve {
            return Ok(AuctionOutcome::no_sale(self.deadline_tick));
        }
        let second = ranked.get(1).map_or(Money::ZERO, |(_, b)| b.amount);
        Ok(AuctionOutcome {
            winner: Some((*winner).clone()),
            price: second.max(self.reserve),
            closing_tick: self.deadline_tick,
        })
    }
}

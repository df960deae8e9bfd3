//! Buyer strategies: the proxy agent that bids on a user's behalf, and a
//! stochastic model of a human who has to be present to act.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocols::Protocol;
use crate::rng::SimRng;
use crate::types::{Money, Tick, UserId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BidderMode {
    Agent,
    Manual,
}

impl BidderMode {
    pub fn name(self) -> &'static str {
        match self {
            BidderMode::Agent => "agent",
            BidderMode::Manual => "manual",
        }
    }
}

/// How a sealed bid relates to the bidder's valuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum VickreyStrategy {
    #[default]
    Truthful,
    Shade(f64),
}

pub fn vickrey_bid_amount(valuation: Money, strategy: VickreyStrategy) -> Money {
    match strategy {
        VickreyStrategy::Truthful => valuation,
        VickreyStrategy::Shade(factor) => Money((factor * valuation.as_f64()).round() as i64),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid bidder profile {id}: {reason}")]
pub struct ProfileError {
    pub id: UserId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BidderProfile {
    pub id: UserId,
    pub mode: BidderMode,
    /// Maximum willingness to pay (English and Vickrey).
    pub threshold: Money,
    /// Inclusive Dutch buy window `(low, high)`.
    pub accept_range: (Money, Money),
    pub attendance_prob: f64,
    pub reaction_delay_ticks: u32,
    pub submit_prob: f64,
    pub vickrey_strategy: VickreyStrategy,
}

impl BidderProfile {
    /// Agent-mode profile that buys anywhere up to `threshold`.
    pub fn agent(id: UserId, threshold: Money) -> Self {
        Self {
            id,
            mode: BidderMode::Agent,
            threshold,
            accept_range: (Money::ZERO, threshold),
            attendance_prob: 1.0,
            reaction_delay_ticks: 0,
            submit_prob: 1.0,
            vickrey_strategy: VickreyStrategy::Truthful,
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let fail = |reason: String| {
            Err(ProfileError {
                id: self.id.clone(),
                reason,
            })
        };
        let (low, high) = self.accept_range;
        if !(low <= high && high <= self.threshold) {
            return fail(format!(
                "accept range [{low}, {high}] must satisfy low <= high <= threshold {}",
                self.threshold
            ));
        }
        for (name, p) in [
            ("attendance_prob", self.attendance_prob),
            ("submit_prob", self.submit_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if let VickreyStrategy::Shade(f) = self.vickrey_strategy {
            if !(f > 0.0 && f <= 1.0) {
                return fail(format!("shade factor must lie in (0, 1], got {f}"));
            }
        }
        Ok(())
    }

    /// The same bidder switched to `mode`.
    pub fn with_mode(&self, mode: BidderMode) -> Self {
        Self {
            mode,
            ..self.clone()
        }
    }

    pub fn in_accept_range(&self, price: Money) -> bool {
        self.accept_range.0 <= price && price <= self.accept_range.1
    }
}

/// What a bidder sees on one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub protocol: Protocol,
    pub tick: Tick,
    /// English standing bid (start price before any bid), Dutch clock price,
    /// zero for sealed bids.
    pub current_price_or_high_bid: Money,
    pub leader: Option<UserId>,
    pub deadline_tick: Tick,
    /// English minimum raise; zero elsewhere.
    pub increment: Money,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Bid(Money),
    Accept,
    SubmitSealed(Money),
    NoOp,
}

/// Proxy agent: raise by the minimum up to the threshold, buy on the Dutch
/// clock inside the accept range, and seal the threshold bid at the start.
pub fn proxy_decide(obs: &Observation, profile: &BidderProfile) -> Action {
    match obs.protocol {
        Protocol::English => {
            if obs.leader.as_ref() == Some(&profile.id) {
                return Action::NoOp;
            }
            let next = match obs.leader {
                None => obs.current_price_or_high_bid,
                Some(_) => obs.current_price_or_high_bid + obs.increment,
            };
            if next <= profile.threshold {
                Action::Bid(next)
            } else {
                Action::NoOp
            }
        }
        Protocol::Dutch => {
            if profile.in_accept_range(obs.current_price_or_high_bid) {
                Action::Accept
            } else {
                Action::NoOp
            }
        }
        Protocol::Vickrey => {
            if obs.tick == 0 {
                Action::SubmitSealed(vickrey_bid_amount(profile.threshold, profile.vickrey_strategy))
            } else {
                Action::NoOp
            }
        }
    }
}

/// Per-bidder memory for the manual model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManualState {
    streak: u32,
    presence_ticks: u32,
    present_now: bool,
    acting_now: bool,
    sealed_plan: Option<bool>,
    sealed_done: bool,
}

impl ManualState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ticks the bidder was present and looked at the auction.
    pub fn presence_ticks(&self) -> u32 {
        self.presence_ticks
    }

    pub fn was_present(&self) -> bool {
        self.present_now
    }

    /// Present and past the reaction delay on the latest tick.
    pub fn could_act(&self) -> bool {
        self.acting_now
    }

    /// `Some(false)` once the bidder has decided never to send a sealed bid.
    pub fn sealed_plan(&self) -> Option<bool> {
        self.sealed_plan
    }
}

/// Manual bidder: present with probability `attendance_prob` each tick, and
/// acting like the proxy only after `reaction_delay_ticks` ticks of
/// unbroken presence. Sealed bids are sent at the first tick with
/// probability `submit_prob`, otherwise never.
///
/// Draws exactly one attendance value per call, plus one sealed-bid decision
/// on the first Vickrey tick.
pub fn manual_decide(
    obs: &Observation,
    profile: &BidderProfile,
    state: &mut ManualState,
    rng: &mut SimRng,
) -> Action {
    let present = rng.chance(profile.attendance_prob);
    state.present_now = present;
    if present {
        state.presence_ticks += 1;
        state.streak += 1;
    } else {
        state.streak = 0;
    }
    state.acting_now = present && state.streak > profile.reaction_delay_ticks;

    if obs.protocol == Protocol::Vickrey {
        let plan = *state
            .sealed_plan
            .get_or_insert_with(|| rng.chance(profile.submit_prob));
        if plan && !state.sealed_done {
            state.sealed_done = true;
            return Action::SubmitSealed(vickrey_bid_amount(profile.threshold, profile.vickrey_strategy));
        }
        return Action::NoOp;
    }

    if state.acting_now {
        proxy_decide(obs, profile)
    } else {
        Action::NoOp
    }
}

/// User involvement: one hand-off for an agent, one per present tick for a
/// manual bidder.
pub fn interaction_count(profile: &BidderProfile, state: &ManualState) -> u32 {
    match profile.mode {
        BidderMode::Agent => 1,
        BidderMode::Manual => state.presence_ticks,
    }
}

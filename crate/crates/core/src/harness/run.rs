use std::collections::BTreeMap;

use crate::agents::{
    interaction_count, manual_decide, proxy_decide, Action, BidderMode, BidderProfile, ManualState,
    Observation,
};
use crate::ledger::{FeedbackRecord, LegacyVote};
use crate::protocols::{AuctionOutcome, Bid, DutchAuction, EnglishAuction, Protocol, SealedBid, VickreyAuction};
use crate::rng::SimRng;
use crate::trust::{expected_optimal_price, optimal_price, OptimalPriceParams};
use crate::types::{Money, Tick, UserId};

use super::{
    HarnessError, ScenarioConfig, STREAM_BIDDER_BASE, STREAM_FEEDBACK, STREAM_POLL, STREAM_PRICE_NOISE,
};

/// Which bidder population produced a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    Agent,
    Manual,
    Mixed,
}

impl Arm {
    pub fn name(self) -> &'static str {
        match self {
            Arm::Agent => "agent",
            Arm::Manual => "manual",
            Arm::Mixed => "mixed",
        }
    }

    fn of(profiles: &[BidderProfile]) -> Self {
        if profiles.iter().all(|p| p.mode == BidderMode::Agent) {
            Arm::Agent
        } else if profiles.iter().all(|p| p.mode == BidderMode::Manual) {
            Arm::Manual
        } else {
            Arm::Mixed
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub arm: Arm,
    pub protocol: Protocol,
    pub seller: UserId,
    pub outcome: AuctionOutcome,
    /// Forecast mean of the optimal price, in money units.
    pub expected_price: f64,
    /// Optimal price with this seed's daily noise draws.
    pub optimal_price_realized: f64,
    /// Ticks from open through the closing tick.
    pub duration_ticks: Tick,
    pub interaction_counts: BTreeMap<UserId, u32>,
    /// Dutch only: in-range price episodes a manual bidder could not act on.
    pub missed_crossings: BTreeMap<UserId, u32>,
    /// Vickrey only: manual bidders who never sent a bid.
    pub missed_submissions: u32,
    pub thresholds: BTreeMap<UserId, Money>,
    pub poll_order: Vec<UserId>,
    /// Vickrey only: the bids on file at close.
    pub sealed_bids: BTreeMap<UserId, SealedBid>,
}

impl RunResult {
    pub fn final_price(&self) -> Option<Money> {
        self.outcome.winner.as_ref().map(|_| self.outcome.price)
    }

    pub fn interactions_total(&self) -> u32 {
        self.interaction_counts.values().sum()
    }

    pub fn missed_crossings_total(&self) -> u32 {
        self.missed_crossings.values().sum()
    }

    /// Winner's threshold minus the price paid.
    pub fn winner_surplus(&self) -> Option<Money> {
        let winner = self.outcome.winner.as_ref()?;
        Some(self.thresholds[winner] - self.outcome.price)
    }
}

/// Runs the config's own seed with each bidder in its configured mode.
pub fn run_auction(config: &ScenarioConfig) -> Result<RunResult, HarnessError> {
    config.validate()?;
    let profiles = config.draw_profiles(config.seed);
    simulate(config, config.seed, profiles)
}

/// Runs `seed` with every bidder switched to `mode`.
pub fn run_arm(config: &ScenarioConfig, seed: u64, mode: BidderMode) -> Result<RunResult, HarnessError> {
    config.validate()?;
    let profiles = config
        .draw_profiles(seed)
        .iter()
        .map(|p| p.with_mode(mode))
        .collect();
    simulate(config, seed, profiles)
}

struct BidderSlot {
    profile: BidderProfile,
    state: ManualState,
    rng: SimRng,
}

impl BidderSlot {
    fn decide(&mut self, obs: &Observation) -> Action {
        match self.profile.mode {
            BidderMode::Agent => proxy_decide(obs, &self.profile),
            BidderMode::Manual => manual_decide(obs, &self.profile, &mut self.state, &mut self.rng),
        }
    }

    /// Present and able to act this tick. Agents always are.
    fn could_act(&self) -> bool {
        self.profile.mode == BidderMode::Agent || self.state.could_act()
    }
}

fn simulate(config: &ScenarioConfig, seed: u64, profiles: Vec<BidderProfile>) -> Result<RunResult, HarnessError> {
    let arm = Arm::of(&profiles);
    let thresholds = profiles.iter().map(|p| (p.id.clone(), p.threshold)).collect();

    let mut order: Vec<usize> = (0..profiles.len()).collect();
    SimRng::for_stream(seed, STREAM_POLL).shuffle(&mut order);
    let poll_order = order.iter().map(|&i| profiles[i].id.clone()).collect();

    let mut slots: Vec<BidderSlot> = profiles
        .into_iter()
        .enumerate()
        .map(|(i, profile)| BidderSlot {
            profile,
            state: ManualState::new(),
            rng: SimRng::for_stream(seed, STREAM_BIDDER_BASE + i as u64),
        })
        .collect();

    let initial = config.start_price.as_f64();
    let expected_price = expected_optimal_price(initial, config.n_days)?;
    let mut noise = SimRng::for_stream(seed, STREAM_PRICE_NOISE);
    let draws = (0..config.n_days).map(|_| noise.next_f64()).collect();
    let optimal_price_realized =
        optimal_price(&OptimalPriceParams::new(initial, config.priority, config.n_days, draws)?);

    let mut missed_crossings: BTreeMap<UserId, u32> =
        slots.iter().map(|s| (s.profile.id.clone(), 0)).collect();
    let mut missed_submissions = 0;
    let mut sealed_bids = BTreeMap::new();

    let outcome = match config.protocol {
        Protocol::English => run_english(config, &mut slots, &order)?,
        Protocol::Dutch => run_dutch(config, &mut slots, &order, &mut missed_crossings)?,
        Protocol::Vickrey => {
            let (outcome, bids) = run_vickrey(config, &mut slots, &order)?;
            missed_submissions = slots
                .iter()
                .filter(|s| s.profile.mode == BidderMode::Manual && !bids.contains_key(&s.profile.id))
                .count() as u32;
            sealed_bids = bids;
            outcome
        }
    };

    Ok(RunResult {
        seed,
        arm,
        protocol: config.protocol,
        seller: config.seller.id.clone(),
        duration_ticks: outcome.closing_tick + 1,
        outcome,
        expected_price,
        optimal_price_realized,
        interaction_counts: slots
            .iter()
            .map(|s| (s.profile.id.clone(), interaction_count(&s.profile, &s.state)))
            .collect(),
        missed_crossings,
        missed_submissions,
        thresholds,
        poll_order,
        sealed_bids,
    })
}

fn run_english(config: &ScenarioConfig, slots: &mut [BidderSlot], order: &[usize]) -> Result<AuctionOutcome, HarnessError> {
    let last = config.last_open_tick();
    let mut auction = EnglishAuction::new(config.start_price, config.increment, last)?;
    for tick in 0..=last {
        for &i in order {
            let obs = Observation {
                protocol: Protocol::English,
                tick,
                current_price_or_high_bid: auction.high_bid().unwrap_or(config.start_price),
                leader: auction.leader().cloned(),
                deadline_tick: last,
                increment: config.increment,
            };
            if let Action::Bid(amount) = slots[i].decide(&obs) {
                auction.apply(Bid::new(tick, slots[i].profile.id.clone(), amount))?;
            }
        }
    }
    let outcome = auction.close(last + 1)?;
    if outcome.is_sale() && outcome.price < config.reserve {
        return Ok(AuctionOutcome::no_sale(outcome.closing_tick));
    }
    Ok(outcome)
}

fn run_dutch(
    config: &ScenarioConfig,
    slots: &mut [BidderSlot],
    order: &[usize],
    missed: &mut BTreeMap<UserId, u32>,
) -> Result<AuctionOutcome, HarnessError> {
    let last = config.last_open_tick();
    let mut auction = DutchAuction::new(config.start_price, config.decrement, config.reserve)?;
    // An in-range episode the bidder has not been able to act on yet.
    let mut pending = vec![false; slots.len()];
    let mut sale = None;

    'clock: for tick in 0..=last {
        let price = auction.price_at(tick);
        for &i in order {
            let obs = Observation {
                protocol: Protocol::Dutch,
                tick,
                current_price_or_high_bid: price,
                leader: None,
                deadline_tick: last,
                increment: Money::ZERO,
            };
            let action = slots[i].decide(&obs);
            let in_range = slots[i].profile.in_accept_range(price);
            if action == Action::Accept {
                pending[i] = false;
                sale = Some(auction.accept(slots[i].profile.id.clone(), tick)?);
                break 'clock;
            }
            if in_range && !slots[i].could_act() {
                pending[i] = true;
            } else if !in_range && pending[i] {
                pending[i] = false;
                *missed.get_mut(&slots[i].profile.id).unwrap() += 1;
            }
        }
    }
    for (i, open) in pending.into_iter().enumerate() {
        if open {
            *missed.get_mut(&slots[i].profile.id).unwrap() += 1;
        }
    }
    Ok(sale.unwrap_or_else(|| AuctionOutcome::no_sale(last)))
}

fn run_vickrey(
    config: &ScenarioConfig,
    slots: &mut [BidderSlot],
    order: &[usize],
) -> Result<(AuctionOutcome, BTreeMap<UserId, SealedBid>), HarnessError> {
    let last = config.last_open_tick();
    let mut auction = VickreyAuction::new(last, config.reserve)?;
    for tick in 0..=last {
        for &i in order {
            let obs = Observation {
                protocol: Protocol::Vickrey,
                tick,
                current_price_or_high_bid: Money::ZERO,
                leader: None,
                deadline_tick: last,
                increment: Money::ZERO,
            };
            if let Action::SubmitSealed(amount) = slots[i].decide(&obs) {
                auction.submit(Bid::new(tick, slots[i].profile.id.clone(), amount))?;
            }
        }
    }
    let outcome = auction.close(last + 1)?;
    Ok((outcome, auction.sealed_bids().clone()))
}

/// Rating model for the winner's post-auction feedback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackModel {
    pub scale_max: f64,
    pub attribute_count: usize,
    pub sigma: f64,
}

impl FeedbackModel {
    pub fn from_config(config: &ScenarioConfig) -> Self {
        Self {
            scale_max: config.scale_max,
            attribute_count: config.critical_attributes.len(),
            sigma: config.feedback_sigma,
        }
    }

    /// RNG a run's feedback is drawn from.
    pub fn rng_for(seed: u64) -> SimRng {
        SimRng::for_stream(seed, STREAM_FEEDBACK)
    }
}

/// The winner's rating of the seller: each attribute is
/// `clamp(scale_max * quality + N(0, sigma), 0, scale_max)`, and the vote is
/// +1 at a mean of at least 60% of the scale, -1 at no more than 20%.
pub fn post_auction_feedback(
    result: &RunResult,
    quality: f64,
    model: &FeedbackModel,
    timestamp: u32,
    rng: &mut SimRng,
) -> Result<Vec<FeedbackRecord>, HarnessError> {
    let winner = result.outcome.winner.clone().ok_or(HarnessError::NoSale)?;
    let ratings: Vec<f64> = (0..model.attribute_count)
        .map(|_| {
            let noise = if model.sigma > 0.0 { rng.gaussian(0.0, model.sigma) } else { 0.0 };
            (model.scale_max * quality + noise).clamp(0.0, model.scale_max)
        })
        .collect();
    let mean = ratings.iter().sum::<f64>() / ratings.len() as f64;
    let legacy_vote = if mean >= 0.6 * model.scale_max {
        LegacyVote::Positive
    } else if mean <= 0.2 * model.scale_max {
        LegacyVote::Negative
    } else {
        LegacyVote::Neutral
    };
    Ok(vec![FeedbackRecord {
        rater: winner,
        seller: result.seller.clone(),
        auction_id: format!("{}-{}-{}", result.protocol.name(), result.arm.name(), result.seed),
        ratings,
        transaction_value: result.outcome.price,
        timestamp,
        legacy_vote,
    }])
}

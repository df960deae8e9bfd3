//! Two-tier feedback store.
//!
//! Every record lives in the central store. Each auction also owns a local
//! cache of rating lists keyed by (rater, seller). A lookup that names an
//! auction is served from that auction's cache when the cache holds the pair
//! and is otherwise redirected to the central store, which then fills the
//! cache. Writes refresh the recording auction's cache entry and drop the
//! pair from every other cache, so a cache entry is always the complete,
//! current rating list and both tiers answer identically.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Money, UserId};

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("invalid ledger config: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} ratings, found {found}")]
    AttributeCountMismatch { expected: usize, found: usize },
    #[error("rating #{index} = {value} outside [0, {scale_max}]")]
    RatingOutOfRange {
        index: usize,
        value: f64,
        scale_max: f64,
    },
    #[error("transaction value {0} is negative")]
    NegativeTransactionValue(Money),
    #[error("no ratings from {rater} for {seller}")]
    NotFound { rater: UserId, seller: UserId },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Names of the rated attributes and the top of the rating scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerConfig {
    critical_attribute_names: Vec<String>,
    scale_max: f64,
}

pub const DEFAULT_SCALE_MAX: f64 = 5.0;

impl LedgerConfig {
    pub fn new(critical_attribute_names: Vec<String>, scale_max: f64) -> Result<Self, LedgerError> {
        if critical_attribute_names.is_empty() {
            return Err(LedgerError::InvalidConfig(
                "at least one critical attribute is required".into(),
            ));
        }
        if !(scale_max.is_finite() && scale_max > 0.0) {
            return Err(LedgerError::InvalidConfig(format!(
                "scale_max must be positive, got {scale_max}"
            )));
        }
        Ok(Self {
            critical_attribute_names,
            scale_max,
        })
    }

    /// Config with `count` attributes named `c1..cN`.
    pub fn with_attribute_count(count: usize, scale_max: f64) -> Result<Self, LedgerError> {
        Self::new((1..=count).map(|i| format!("c{i}")).collect(), scale_max)
    }

    pub fn attribute_count(&self) -> usize {
        self.critical_attribute_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.critical_attribute_names
    }

    pub fn scale_max(&self) -> f64 {
        self.scale_max
    }
}

impl Default for LedgerConfig {
    fn default() -> Self {
        Self {
            critical_attribute_names: vec![
                "delivery".to_string(),
                "quality".to_string(),
                "price".to_string(),
            ],
            scale_max: DEFAULT_SCALE_MAX,
        }
    }
}

/// Scalar vote of the accumulative/ratio reputation models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum LegacyVote {
    Negative,
    Neutral,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("vote {0} is not one of -1, 0, +1")]
pub struct InvalidVote(pub i64);

impl LegacyVote {
    pub fn points(self) -> i64 {
        match self {
            LegacyVote::Negative => -1,
            LegacyVote::Neutral => 0,
            LegacyVote::Positive => 1,
        }
    }

    pub fn from_points(points: i64) -> Result<Self, InvalidVote> {
        match points {
            -1 => Ok(LegacyVote::Negative),
            0 => Ok(LegacyVote::Neutral),
            1 => Ok(LegacyVote::Positive),
            other => Err(InvalidVote(other)),
        }
    }
}

impl TryFrom<i8> for LegacyVote {
    type Error = InvalidVote;

    fn try_from(value: i8) -> Result<Self, Self::Error> {
        Self::from_points(value as i64)
    }
}

impl From<LegacyVote> for i8 {
    fn from(v: LegacyVote) -> i8 {
        v.points() as i8
    }
}

/// One rater-to-seller rating event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeedbackRecord {
    pub rater: UserId,
    pub seller: UserId,
    pub auction_id: String,
    pub ratings: Vec<f64>,
    pub transaction_value: Money,
    pub timestamp: u32,
    pub legacy_vote: LegacyVote,
}

/// Which tier answered a lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Local,
    Central,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TierStats {
    pub local_hits: u64,
    pub central_redirects: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lookup {
    /// One rating vector per auction, ordered by auction id.
    pub ratings: Vec<Vec<f64>>,
    pub tier: Tier,
}

type RecordKey = (UserId, UserId, String);
type PairKey = (UserId, UserId);
type AuctionCache = BTreeMap<PairKey, Vec<Vec<f64>>>;

#[derive(Debug)]
pub struct FeedbackLedger {
    config: LedgerConfig,
    central: BTreeMap<RecordKey, FeedbackRecord>,
    local: RwLock<BTreeMap<String, AuctionCache>>,
    local_hits: AtomicU64,
    central_redirects: AtomicU64,
}

impl FeedbackLedger {
    pub fn new(config: LedgerConfig) -> Self {
        Self {
            config,
            central: BTreeMap::new(),
            local: RwLock::new(BTreeMap::new()),
            local_hits: AtomicU64::new(0),
            central_redirects: AtomicU64::new(0),
        }
    }

    pub fn config(&self) -> &LedgerConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.central.len()
    }

    pub fn is_empty(&self) -> bool {
        self.central.is_empty()
    }

    /// All records in (rater, seller, auction_id) order.
    pub fn records(&self) -> impl Iterator<Item = &FeedbackRecord> {
        self.central.values()
    }

    pub fn validate(&self, record: &FeedbackRecord) -> Result<(), LedgerError> {
        let expected = self.config.attribute_count();
        if record.ratings.len() != expected {
            return Err(LedgerError::AttributeCountMismatch {
                expected,
                found: record.ratings.len(),
            });
        }
        let scale_max = self.config.scale_max;
        for (index, &value) in record.ratings.iter().enumerate() {
            if !(value.is_finite() && (0.0..=scale_max).contains(&value)) {
                return Err(LedgerError::RatingOutOfRange {
                    index,
                    value,
                    scale_max,
                });
            }
        }
        if record.transaction_value < Money::ZERO {
            return Err(LedgerError::NegativeTransactionValue(record.transaction_value));
        }
        Ok(())
    }

    /// Stores a record, replacing any earlier record for the same
    /// (rater, seller, auction_id).
    pub fn record_feedback(&mut self, record: FeedbackRecord) -> Result<(), LedgerError> {
        self.validate(&record)?;
        let pair = (record.rater.clone(), record.seller.clone());
        let auction_id = record.auction_id.clone();
        let key = (pair.0.clone(), pair.1.clone(), auction_id.clone());
        self.central.insert(key, record);

        let fresh = self.central_ratings(&pair.0, &pair.1);
        let caches = self.local.get_mut().unwrap_or_else(|e| e.into_inner());
        for (id, cache) in caches.iter_mut() {
            if *id != auction_id {
                cache.remove(&pair);
            }
        }
        caches.entry(auction_id).or_default().insert(pair, fresh);
        Ok(())
    }

    fn central_ratings(&self, rater: &UserId, seller: &UserId) -> Vec<Vec<f64>> {
        self.central
            .iter()
            .filter(|((r, s, _), _)| r == rater && s == seller)
            .map(|(_, rec)| rec.ratings.clone())
            .collect()
    }

    /// Ratings from `rater` for `seller`, consulting the local cache of
    /// `locality` first.
    pub fn lookup_ratings(
        &self,
        rater: &UserId,
        seller: &UserId,
        locality: Option<&str>,
    ) -> Result<Lookup, LedgerError> {
        let pair = (rater.clone(), seller.clone());
        if let Some(auction) = locality {
            let caches = self.local.read().unwrap_or_else(|e| e.into_inner());
            if let Some(hit) = caches.get(auction).and_then(|c| c.get(&pair)) {
                self.local_hits.fetch_add(1, Ordering::Relaxed);
                return Ok(Lookup {
                    ratings: hit.clone(),
                    tier: Tier::Local,
                });
            }
        }

        self.central_redirects.fetch_add(1, Ordering::Relaxed);
        let ratings = self.central_ratings(rater, seller);
        if ratings.is_empty() {
            return Err(LedgerError::NotFound {
                rater: rater.clone(),
                seller: seller.clone(),
            });
        }
        if let Some(auction) = locality {
            let mut caches = self.local.write().unwrap_or_else(|e| e.into_inner());
            caches
                .entry(auction.to_string())
                .or_default()
                .insert(pair, ratings.clone());
        }
        Ok(Lookup {
            ratings,
            tier: Tier::Central,
        })
    }

    pub fn tier_stats(&self) -> TierStats {
        TierStats {
            local_hits: self.local_hits.load(Ordering::Relaxed),
            central_redirects: self.central_redirects.load(Ordering::Relaxed),
        }
    }

    /// Sellers the buyer has rated at least once (a rating implies a win).
    pub fn wins_of(&self, buyer: &UserId) -> BTreeSet<UserId> {
        self.central
            .keys()
            .filter(|(r, _, _)| r == buyer)
            .map(|(_, s, _)| s.clone())
            .collect()
    }

    pub fn common_partners(&self, x: &UserId, y: &UserId) -> BTreeSet<UserId> {
        let wx = self.wins_of(x);
        let wy = self.wins_of(y);
        wx.intersection(&wy).cloned().collect()
    }

    pub fn raters(&self) -> BTreeSet<UserId> {
        self.central.keys().map(|(r, _, _)| r.clone()).collect()
    }

    /// The rater sharing the most sellers with `x`; ties go to the smallest
    /// id. `None` when no other rater overlaps at all.
    pub fn select_peer(&self, x: &UserId) -> Option<UserId> {
        let mine = self.wins_of(x);
        let mut best: Option<(usize, UserId)> = None;
        for candidate in self.raters() {
            if &candidate == x {
                continue;
            }
            let overlap = self.wins_of(&candidate).intersection(&mine).count();
            if overlap == 0 {
                continue;
            }
            // raters() is ordered, so strict comparison keeps the smallest id.
            if best.as_ref().is_none_or(|(n, _)| overlap > *n) {
                best = Some((overlap, candidate));
            }
        }
        best.map(|(_, id)| id)
    }

    /// Legacy votes received by `seller`, in record order.
    pub fn votes_for(&self, seller: &UserId) -> Vec<LegacyVote> {
        self.central
            .values()
            .filter(|r| &r.seller == seller)
            .map(|r| r.legacy_vote)
            .collect()
    }

    /// True when `user` appears as a rater or as a seller.
    pub fn contains_user(&self, user: &UserId) -> bool {
        self.central.keys().any(|(r, s, _)| r == user || s == user)
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), LedgerError> {
        for record in self.central.values() {
            let line = serde_json::to_string(record)
                .map_err(|e| LedgerError::Io(io::Error::other(e)))?;
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), LedgerError> {
        self.write_jsonl(BufWriter::new(File::create(path)?))
    }

    /// Replays a JSON-lines ledger. Blank lines are skipped; errors carry the
    /// 1-based line number.
    pub fn read_jsonl<R: BufRead>(reader: R, config: LedgerConfig) -> Result<Self, LedgerError> {
        let mut ledger = Self::new(config);
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: FeedbackRecord =
                serde_json::from_str(&line).map_err(|e| LedgerError::Line {
                    line: line_no,
                    message: e.to_string(),
                })?;
            ledger
                .record_feedback(record)
                .map_err(|e| LedgerError::Line {
                    line: line_no,
                    message: e.to_string(),
                })?;
        }
        Ok(ledger)
    }

    pub fn load(path: &Path, config: LedgerConfig) -> Result<Self, LedgerError> {
        Self::read_jsonl(BufReader::new(File::open(path)?), config)
    }
}

impl Clone for FeedbackLedger {
    fn clone(&self) -> Self {
        let local = self.local.read().unwrap_or_else(|e| e.into_inner()).clone();
        Self {
            config: self.config.clone(),
            central: self.central.clone(),
            local: RwLock::new(local),
            local_hits: AtomicU64::new(self.local_hits.load(Ordering::Relaxed)),
            central_redirects: AtomicU64::new(self.central_redirects.load(Ordering::Relaxed)),
        }
    }
}

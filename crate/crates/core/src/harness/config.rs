//! Scenario configuration and its JSON schema.
//!
//! ```json
//! {
//!   "protocol": "dutch",
//!   "seller": { "id": "s", "quality": 0.8 },
//!   "bidders": [
//!     { "id": "b1", "threshold": { "uniform": [60, 140] }, "attendance_prob": 0.3 },
//!     { "id": "b2", "threshold": 100, "accept_range": [60, 80] }
//!   ],
//!   "start_price": 150, "decrement": 5, "n_days": 5, "priority": 0.5, "seed": 1
//! }
//! ```
//!
//! Optional keys and defaults: `increment` 5, `decrement` 5, `reserve` 0,
//! `ticks_per_day` 10, `priority` 0, `seed` 0, `scale_max` 5,
//! `critical_attributes` `["delivery", "quality", "price"]`,
//! `feedback_sigma` 0.5, `star_tiers` yellow 10 / blue 50 / turquoise 100 /
//! purple 500 / red 1000 / green 5000. Per bidder: `mode` `"agent"`,
//! `accept_range` derived from `accept_fractions` (default `[0.5, 1.0]` of
//! the drawn threshold), `attendance_prob` 1, `reaction_delay_ticks` 0,
//! `submit_prob` 1, `vickrey_strategy` `"truthful"` (or `{"shade": f}`).

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{BidderMode, BidderProfile, VickreyStrategy};
use crate::ledger::{LedgerConfig, DEFAULT_SCALE_MAX};
use crate::protocols::Protocol;
use crate::rng::SimRng;
use crate::trust::StarTiers;
use crate::types::{Money, Tick, UserId};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at `{key}`: {message}")]
    Schema { key: String, message: String },
}

fn schema(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellerSpec {
    pub id: UserId,
    pub quality: f64,
}

/// A fixed threshold or one drawn uniformly per seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThresholdSpec {
    Fixed(Money),
    Uniform { uniform: (Money, Money) },
}

impl ThresholdSpec {
    pub fn min(self) -> Money {
        match self {
            ThresholdSpec::Fixed(m) => m,
            ThresholdSpec::Uniform { uniform } => uniform.0,
        }
    }

    fn draw(self, rng: &mut SimRng) -> Money {
        match self {
            ThresholdSpec::Fixed(m) => m,
            ThresholdSpec::Uniform { uniform: (lo, hi) } => {
                Money(rng.range_inclusive(lo.units(), hi.units()))
            }
        }
    }
}

fn default_one() -> f64 {
    1.0
}

fn default_fractions() -> (f64, f64) {
    (0.5, 1.0)
}

fn default_mode() -> BidderMode {
    BidderMode::Agent
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BidderSpec {
    pub id: UserId,
    #[serde(default = "default_mode")]
    pub mode: BidderMode,
    pub threshold: ThresholdSpec,
    #[serde(default)]
    pub accept_range: Option<(Money, Money)>,
    #[serde(default = "default_fractions")]
    pub accept_fractions: (f64, f64),
    #[serde(default = "default_one")]
    pub attendance_prob: f64,
    #[serde(default)]
    pub reaction_delay_ticks: u32,
    #[serde(default = "default_one")]
    pub submit_prob: f64,
    #[serde(default)]
    pub vickrey_strategy: VickreyStrategy,
}

impl BidderSpec {
    /// Agent bidder with a fixed threshold and default behavior.
    pub fn fixed(id: UserId, threshold: Money) -> Self {
        Self {
            id,
            mode: BidderMode::Agent,
            threshold: ThresholdSpec::Fixed(threshold),
            accept_range: None,
            accept_fractions: default_fractions(),
            attendance_prob: 1.0,
            reaction_delay_ticks: 0,
            submit_prob: 1.0,
            vickrey_strategy: VickreyStrategy::Truthful,
        }
    }

    fn profile(&self, threshold: Money) -> BidderProfile {
        let accept_range = self.accept_range.unwrap_or_else(|| {
            let t = threshold.as_f64();
            let (lo, hi) = self.accept_fractions;
            (Money((lo * t).round() as i64), Money((hi * t).round() as i64))
        });
        BidderProfile {
            id: self.id.clone(),
            mode: self.mode,
            threshold,
            accept_range,
            attendance_prob: self.attendance_prob,
            reaction_delay_ticks: self.reaction_delay_ticks,
            submit_prob: self.submit_prob,
            vickrey_strategy: self.vickrey_strategy,
        }
    }
}

fn default_increment() -> Money {
    Money(5)
}

fn default_ticks_per_day() -> u32 {
    10
}

fn default_scale_max() -> f64 {
    DEFAULT_SCALE_MAX
}

fn default_attributes() -> Vec<String> {
    LedgerConfig::default().attribute_names().to_vec()
}

fn default_sigma() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub protocol: Protocol,
    pub seller: SellerSpec,
    pub bidders: Vec<BidderSpec>,
    pub start_price: Money,
    #[serde(default = "default_increment")]
    pub increment: Money,
    #[serde(default = "default_increment")]
    pub decrement: Money,
    #[serde(default)]
    pub reserve: Money,
    pub n_days: u32,
    #[serde(default = "default_ticks_per_day")]
    pub ticks_per_day: u32,
    #[serde(default)]
    pub priority: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_scale_max")]
    pub scale_max: f64,
    #[serde(default = "default_attributes")]
    pub critical_attributes: Vec<String>,
    #[serde(default = "default_sigma")]
    pub feedback_sigma: f64,
    #[serde(default)]
    pub star_tiers: StarTiers,
}

impl ScenarioConfig {
    /// Minimal config with every optional field at its default.
    pub fn new(
        protocol: Protocol,
        seller: SellerSpec,
        bidders: Vec<BidderSpec>,
        start_price: Money,
        n_days: u32,
    ) -> Self {
        Self {
            protocol,
            seller,
            bidders,
            start_price,
            increment: default_increment(),
            decrement: default_increment(),
            reserve: Money::ZERO,
            n_days,
            ticks_per_day: default_ticks_per_day(),
            priority: 0.0,
            seed: 0,
            scale_max: default_scale_max(),
            critical_attributes: default_attributes(),
            feedback_sigma: default_sigma(),
            star_tiers: StarTiers::default(),
        }
    }

    /// Total ticks the auction may stay open.
    pub fn deadline_ticks(&self) -> Tick {
        self.n_days * self.ticks_per_day
    }

    /// Last tick on which bids are accepted.
    pub fn last_open_tick(&self) -> Tick {
        self.deadline_ticks() - 1
    }

    pub fn ledger_config(&self) -> LedgerConfig {
        LedgerConfig::new(self.critical_attributes.clone(), self.scale_max)
            .expect("validated config yields a valid ledger config")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |key: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(schema(key, format!("{v} outside the closed interval [0, 1]")))
            }
        };
        unit("priority", self.priority)?;
        unit("seller.quality", self.seller.quality)?;
        if self.bidders.is_empty() {
            return Err(schema("bidders", "at least one bidder is required"));
        }
        if self.start_price <= Money::ZERO {
            return Err(schema("start_price", "must be positive"));
        }
        if self.n_days == 0 {
            return Err(schema("n_days", "must be at least 1"));
        }
        if self.ticks_per_day == 0 {
            return Err(schema("ticks_per_day", "must be at least 1"));
        }
        if self.increment <= Money::ZERO {
            return Err(schema("increment", "must be positive"));
        }
        if self.decrement <= Money::ZERO {
            return Err(schema("decrement", "must be positive"));
        }
        if self.reserve < Money::ZERO || self.reserve > self.start_price {
            return Err(schema("reserve", "must lie in [0, start_price]"));
        }
        if !(self.scale_max.is_finite() && self.scale_max > 0.0) {
            return Err(schema("scale_max", "must be positive"));
        }
        if self.critical_attributes.is_empty() {
            return Err(schema("critical_attributes", "at least one attribute is required"));
        }
        if !(self.feedback_sigma.is_finite() && self.feedback_sigma >= 0.0) {
            return Err(schema("feedback_sigma", "must be non-negative"));
        }

        let mut seen = BTreeSet::new();
        for (i, b) in self.bidders.iter().enumerate() {
            let key = |field: &str| format!("bidders.{i}.{field}");
            if !seen.insert(&b.id) {
                return Err(schema(key("id"), format!("duplicate bidder id {}", b.id)));
            }
            if b.id == self.seller.id {
                return Err(schema(key("id"), "bidder id equals the seller id"));
            }
            unit(&key("attendance_prob"), b.attendance_prob)?;
            unit(&key("submit_prob"), b.submit_prob)?;
            match b.threshold {
                ThresholdSpec::Fixed(m) if m < Money::ZERO => {
                    return Err(schema(key("threshold"), "must be non-negative"));
                }
                ThresholdSpec::Uniform { uniform: (lo, hi) } if lo < Money::ZERO || lo > hi => {
                    return Err(schema(key("threshold"), "uniform bounds must satisfy 0 <= lo <= hi"));
                }
                _ => {}
            }
            let (flo, fhi) = b.accept_fractions;
            if !(0.0 <= flo && flo <= fhi && fhi <= 1.0) {
                return Err(schema(
                    key("accept_fractions"),
                    "must satisfy 0 <= low <= high <= 1",
                ));
            }
            if let Some((lo, hi)) = b.accept_range {
                if lo > hi || hi > b.threshold.min() {
                    return Err(schema(
                        key("accept_range"),
                        "must satisfy low <= high <= the smallest possible threshold",
                    ));
                }
            }
            if let VickreyStrategy::Shade(f) = b.vickrey_strategy {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(schema(key("vickrey_strategy"), "shade factor must lie in (0, 1]"));
                }
            }
        }
        Ok(())
    }

    /// Bidder profiles for one seed. Both arms of a matched pair call this
    /// with the same seed and so see the same thresholds.
    pub fn draw_profiles(&self, seed: u64) -> Vec<BidderProfile> {
        let mut rng = SimRng::for_stream(seed, super::STREAM_VALUATION);
        self.bidders
            .iter()
            .map(|b| {
                let threshold = b.threshold.draw(&mut rng);
                b.profile(threshold)
            })
            .collect()
    }
}

/// Parses and validates a scenario. Unknown keys are a schema error unless
/// `allow_unknown` is set.
pub fn parse_config(text: &str, allow_unknown: bool) -> Result<ScenarioConfig, ConfigError> {
    let parse_err = |e: serde_json::Error| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let mut unknown = Vec::new();
    let mut de = serde_json::Deserializer::from_str(text);
    let config: ScenarioConfig =
        serde_ignored::deserialize(&mut de, |path| unknown.push(path.to_string()))
            .map_err(parse_err)?;
    de.end().map_err(parse_err)?;
    if !allow_unknown {
        if let Some(key) = unknown.into_iter().next() {
            return Err(schema(key, "unknown key"));
        }
    }
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path, allow_unknown: bool) -> Result<ScenarioConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, allow_unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "protocol": "english",
        "seller": { "id": "s", "quality": 0.7 },
        "bidders": [ { "id": "b1", "threshold": 100 } ],
        "start_price": 50,
        "n_days": 5
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL, false).unwrap();
        assert_eq!(c.ticks_per_day, 10);
        assert_eq!(c.scale_max, 5.0);
        assert_eq!(c.increment, Money(5));
        assert_eq!(c.star_tiers, StarTiers::default());
        assert_eq!(c.critical_attributes.len(), 3);
        assert_eq!(c.deadline_ticks(), 50);
        assert_eq!(c.bidders[0].mode, BidderMode::Agent);
        assert_eq!(c.bidders[0].submit_prob, 1.0);
    }

    #[test]
    fn priority_out_of_range() {
        let text = MINIMAL.replace("\"n_days\": 5", "\"n_days\": 5, \"priority\": 1.5");
        match parse_config(&text, false) {
            Err(ConfigError::Schema { key, message }) => {
                assert_eq!(key, "priority");
                assert!(message.contains("[0, 1]"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_named() {
        let text = MINIMAL.replace("\"n_days\": 5", "\"n_days\": 5, \"colour\": \"red\"");
        match parse_config(&text, false) {
            Err(ConfigError::Schema { key, .. }) => assert_eq!(key, "colour"),
            other => panic!("{other:?}"),
        }
        assert!(parse_config(&text, true).is_ok());

        let nested = MINIMAL.replace("\"threshold\": 100", "\"threshold\": 100, \"hat\": 1");
        match parse_config(&nested, false) {
            Err(ConfigError::Schema { key, .. }) => assert!(key.ends_with("hat"), "{key}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        match parse_config("{\n  \"protocol\": \"english\",\n  oops\n}", false) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_rules() {
        let base = parse_config(MINIMAL, false).unwrap();
        let mut c = base.clone();
        c.bidders.clear();
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.bidders.push(c.bidders[0].clone());
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.bidders[0].accept_range = Some((Money(10), Money(200)));
        assert!(c.validate().is_err());
        let mut c = base.clone();
        c.bidders[0].threshold = ThresholdSpec::Uniform {
            uniform: (Money(90), Money(10)),
        };
        assert!(c.validate().is_err());
        let mut c = base;
        c.reserve = Money(80);
        assert!(c.validate().is_err());
    }

    #[test]
    fn uniform_thresholds_and_derived_ranges() {
        let text = MINIMAL.replace(
            "\"threshold\": 100",
            "\"threshold\": {\"uniform\": [60, 140]}, \"accept_fractions\": [0.5, 0.9]",
        );
        let c = parse_config(&text, false).unwrap();
        for seed in 0..200 {
            let p = &c.draw_profiles(seed)[0];
            assert!((60..=140).contains(&p.threshold.units()));
            assert_eq!(p.accept_range.1, Money((0.9 * p.threshold.as_f64()).round() as i64));
            p.validate().unwrap();
        }
        assert_eq!(c.draw_profiles(5), c.draw_profiles(5));
    }
}

use rayon::prelude::*;

use crate::agents::BidderMode;
use crate::ledger::{FeedbackLedger, FeedbackRecord};
use crate::stats::{mean, std_dev};

use super::run::{post_auction_feedback, run_arm, Arm, FeedbackModel, RunResult};
use super::{HarnessError, ScenarioConfig};

/// Aggregates for one arm. Price statistics cover sold runs only.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSummary {
    pub arm: Arm,
    pub replications: usize,
    pub base_seed: u64,
    pub sales: usize,
    pub sale_rate: f64,
    pub mean_final_price: f64,
    pub sd_final_price: f64,
    pub mean_duration_ticks: f64,
    pub sd_duration_ticks: f64,
    pub mean_interactions: f64,
    pub sd_interactions: f64,
    pub missed_crossings_total: u64,
    pub missed_submissions_total: u64,
}

impl ArmSummary {
    pub fn from_runs<'a>(arm: Arm, base_seed: u64, runs: impl IntoIterator<Item = &'a RunResult>) -> Self {
        let runs: Vec<&RunResult> = runs.into_iter().collect();
        let prices: Vec<f64> = runs.iter().filter_map(|r| r.final_price()).map(|p| p.as_f64()).collect();
        let durations: Vec<f64> = runs.iter().map(|r| r.duration_ticks as f64).collect();
        let interactions: Vec<f64> = runs.iter().map(|r| r.interactions_total() as f64).collect();
        let n = runs.len();
        Self {
            arm,
            replications: n,
            base_seed,
            sales: prices.len(),
            sale_rate: if n == 0 { 0.0 } else { prices.len() as f64 / n as f64 },
            mean_final_price: mean(&prices),
            sd_final_price: std_dev(&prices),
            mean_duration_ticks: mean(&durations),
            sd_duration_ticks: std_dev(&durations),
            mean_interactions: mean(&interactions),
            sd_interactions: std_dev(&interactions),
            missed_crossings_total: runs.iter().map(|r| r.missed_crossings_total() as u64).sum(),
            missed_submissions_total: runs.iter().map(|r| r.missed_submissions as u64).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub replications: usize,
    pub base_seed: u64,
    pub agent: ArmSummary,
    pub manual: ArmSummary,
}

/// Matched pairs plus the feedback each arm generated.
#[derive(Debug)]
pub struct ExperimentReport {
    /// `(agent, manual)` per seed, in seed order.
    pub pairs: Vec<(RunResult, RunResult)>,
    pub summary: ExperimentSummary,
    pub agent_ledger: FeedbackLedger,
    pub manual_ledger: FeedbackLedger,
}

impl ExperimentReport {
    /// Per-run rows in CSV order: the agent run, then the manual run, per seed.
    pub fn runs(&self) -> impl Iterator<Item = &RunResult> {
        self.pairs.iter().flat_map(|(a, m)| [a, m])
    }
}

type PairOutput = (RunResult, RunResult, Vec<FeedbackRecord>, Vec<FeedbackRecord>);

/// Runs seeds `config.seed .. config.seed + replications` once with every
/// bidder as an agent and once with every bidder manual. Seeds run in
/// parallel; feedback is appended to the ledgers in seed order.
pub fn run_experiment(config: &ScenarioConfig, replications: usize) -> Result<ExperimentReport, HarnessError> {
    if replications == 0 {
        return Err(HarnessError::NoReplications);
    }
    config.validate()?;
    let base = config.seed;
    let model = FeedbackModel::from_config(config);

    let outputs: Vec<PairOutput> = (0..replications as u64)
        .into_par_iter()
        .map(|k| {
            let seed = base.wrapping_add(k);
            let timestamp = k as u32;
            let agent = run_arm(config, seed, BidderMode::Agent)?;
            let manual = run_arm(config, seed, BidderMode::Manual)?;
            let feedback = |r: &RunResult| -> Result<Vec<FeedbackRecord>, HarnessError> {
                if !r.outcome.is_sale() {
                    return Ok(Vec::new());
                }
                post_auction_feedback(r, config.seller.quality, &model, timestamp, &mut FeedbackModel::rng_for(seed))
            };
            let fa = feedback(&agent)?;
            let fm = feedback(&manual)?;
            Ok((agent, manual, fa, fm))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut agent_ledger = FeedbackLedger::new(config.ledger_config());
    let mut manual_ledger = FeedbackLedger::new(config.ledger_config());
    let mut pairs = Vec::with_capacity(outputs.len());
    for (agent, manual, fa, fm) in outputs {
        for rec in fa {
            agent_ledger.record_feedback(rec)?;
        }
        for rec in fm {
            manual_ledger.record_feedback(rec)?;
        }
        pairs.push((agent, manual));
    }

    let summary = ExperimentSummary {
        replications,
        base_seed: base,
        agent: ArmSummary::from_runs(Arm::Agent, base, pairs.iter().map(|(a, _)| a)),
        manual: ArmSummary::from_runs(Arm::Manual, base, pairs.iter().map(|(_, m)| m)),
    };
    Ok(ExperimentReport {
        pairs,
        summary,
        agent_ledger,
        manual_ledger,
    })
}

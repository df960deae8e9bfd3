use std::fs;
use std::io::Write;
use std::path::Path;

use super::experiment::{run_experiment, ArmSummary, ExperimentReport, ExperimentSummary};
use super::run::RunResult;
use super::{HarnessError, ScenarioConfig};

pub const RUNS_HEADER: [&str; 11] = [
    "seed",
    "arm",
    "protocol",
    "final_price",
    "expected_price",
    "optimal_price_realized",
    "duration_ticks",
    "interactions_total",
    "missed_crossings",
    "missed_submissions",
    "sold",
];

pub const SUMMARY_HEADER: [&str; 13] = [
    "arm",
    "replications",
    "base_seed",
    "sale_rate",
    "mean_final_price",
    "sd_final_price",
    "mean_duration_ticks",
    "sd_duration_ticks",
    "mean_interactions",
    "sd_interactions",
    "missed_crossings_total",
    "missed_submissions_total",
    "sales",
];

fn float(x: f64) -> String {
    format!("{x:.6}")
}

fn csv_err(e: csv::Error) -> HarnessError {
    HarnessError::Output {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

/// One row per run. `final_price` is empty for unsold runs.
pub fn write_runs_csv<'a, W: Write>(out: W, runs: impl IntoIterator<Item = &'a RunResult>) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUNS_HEADER).map_err(csv_err)?;
    for r in runs {
        w.write_record([
            r.seed.to_string(),
            r.arm.name().to_string(),
            r.protocol.name().to_string(),
            r.final_price().map(|p| p.to_string()).unwrap_or_default(),
            float(r.expected_price),
            float(r.optimal_price_realized),
            r.duration_ticks.to_string(),
            r.interactions_total().to_string(),
            r.missed_crossings_total().to_string(),
            r.missed_submissions.to_string(),
            r.outcome.is_sale().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

pub fn write_summary_csv<W: Write>(out: W, summary: &ExperimentSummary) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for arm in [&summary.agent, &summary.manual] {
        w.write_record(summary_row(arm)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

fn summary_row(s: &ArmSummary) -> [String; 13] {
    [
        s.arm.name().to_string(),
        s.replications.to_string(),
        s.base_seed.to_string(),
        float(s.sale_rate),
        float(s.mean_final_price),
        float(s.sd_final_price),
        float(s.mean_duration_ticks),
        float(s.sd_duration_ticks),
        float(s.mean_interactions),
        float(s.sd_interactions),
        s.missed_crossings_total.to_string(),
        s.missed_submissions_total.to_string(),
        s.sales.to_string(),
    ]
}

/// Runs the experiment and writes `runs.csv` and `summary.csv` into
/// `out_dir`, creating it if needed.
pub fn simulate_to_dir(config: &ScenarioConfig, replications: usize, out_dir: &Path) -> Result<ExperimentReport, HarnessError> {
    let report = run_experiment(config, replications)?;
    let io_err = |path: &Path, e: std::io::Error| HarnessError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let runs_path = out_dir.join("runs.csv");
    let file = fs::File::create(&runs_path).map_err(|e| io_err(&runs_path, e))?;
    write_runs_csv(std::io::BufWriter::new(file), report.runs())?;

    let summary_path = out_dir.join("summary.csv");
    let file = fs::File::create(&summary_path).map_err(|e| io_err(&summary_path, e))?;
    write_summary_csv(std::io::BufWriter::new(file), &report.summary)?;
    Ok(report)
}

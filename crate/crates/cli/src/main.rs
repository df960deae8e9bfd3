//! `auction-trust` command line.
//!
//! Exit status: 0 on success, 2 on usage errors (bad flags, missing input
//! paths, unusable output directory), 1 on data errors (malformed ledger or
//! config contents, users without a peer).

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use auction_trust::fixtures::{table_ledger, uid};
use auction_trust::harness::{
    baselines, load_config, simulate_to_dir, trust_snapshot, write_summary_csv, ConfigError, HarnessError,
    SnapshotError, TrustFactors,
};
use auction_trust::ledger::{FeedbackLedger, LedgerConfig, LedgerError, DEFAULT_SCALE_MAX};
use auction_trust::trust::{
    experience_score, optimal_price_weight, pair_similarity, rater_weight, time_component, HistoryStats,
    StarTiers, WeightMode,
};
use auction_trust::UserId;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "auction-trust", version, about = "Online-auction simulator with a weight-value trust model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run matched agent/manual replications and write runs.csv and summary.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        /// Base seed; overrides the config's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Ignore unknown keys in the config instead of rejecting them.
        #[arg(long)]
        allow_unknown: bool,
    },
    /// Print the trust report of a user in a JSON-lines ledger.
    Trust {
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long)]
        user: String,
        /// Which rater weight enters the trust exponent.
        #[arg(long, value_enum, default_value_t = Mode::Normalized)]
        mode: Mode,
        #[arg(long, requires = "optimal_price")]
        final_price: Option<f64>,
        #[arg(long, requires = "final_price")]
        optimal_price: Option<f64>,
        #[arg(long, requires = "days_since_last")]
        prior_feedback: Option<f64>,
        #[arg(long, requires = "prior_feedback")]
        days_since_last: Option<f64>,
        #[arg(long, requires = "won")]
        participated: Option<u32>,
        #[arg(long, requires = "participated")]
        won: Option<u32>,
        #[command(flatten)]
        shape: LedgerShape,
    },
    /// Print the rater-weight worked example from the embedded fixture.
    DemoTable2,
    /// Print accumulative, ratio and star-tier reputation of a seller.
    Baselines {
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long)]
        user: String,
        #[command(flatten)]
        shape: LedgerShape,
    },
}

#[derive(clap::Args)]
struct LedgerShape {
    #[arg(long, default_value_t = DEFAULT_SCALE_MAX)]
    scale_max: f64,
    /// Number of rated attributes per record.
    #[arg(long, default_value_t = 3)]
    attributes: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Raw,
    Normalized,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 1,
        }
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such file", path.display())))
    }
}

fn parse_user(user: &str) -> Result<UserId, Failure> {
    UserId::new(user).map_err(|_| Failure::Usage("--user must not be empty".into()))
}

fn open_ledger(path: &Path, shape: &LedgerShape) -> Result<FeedbackLedger, Failure> {
    require_file(path)?;
    let config = LedgerConfig::with_attribute_count(shape.attributes, shape.scale_max)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    FeedbackLedger::load(path, config).map_err(|e| match e {
        LedgerError::Io(io) => Failure::Usage(format!("{}: {io}", path.display())),
        other => Failure::Data(format!("{}: {other}", path.display())),
    })
}

fn simulate(
    config: &Path,
    reps: usize,
    seed: Option<u64>,
    out: &Path,
    allow_unknown: bool,
) -> Result<(), Failure> {
    require_file(config)?;
    if reps == 0 {
        return Err(Failure::Usage("--reps must be at least 1".into()));
    }
    let mut scenario = load_config(config, allow_unknown).map_err(|e| match e {
        ConfigError::Io { .. } => Failure::Usage(e.to_string()),
        other => Failure::Data(format!("{}: {other}", config.display())),
    })?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    let report = simulate_to_dir(&scenario, reps, out).map_err(|e| match e {
        HarnessError::Output { .. } => Failure::Usage(e.to_string()),
        other => Failure::Data(other.to_string()),
    })?;
    write_summary_csv(io::stdout().lock(), &report.summary).map_err(|e| Failure::Data(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn trust(
    ledger: &Path,
    user: &str,
    mode: Mode,
    prices: Option<(f64, f64)>,
    history: Option<(f64, f64)>,
    counts: Option<(u32, u32)>,
    shape: &LedgerShape,
) -> Result<(), Failure> {
    let user = parse_user(user)?;
    let ledger = open_ledger(ledger, shape)?;
    let usage = |e: auction_trust::trust::TrustError| Failure::Usage(e.to_string());

    let mut factors = TrustFactors::neutral();
    if let Some((final_price, optimal)) = prices {
        factors.optimal_price_weight = optimal_price_weight(final_price, optimal).map_err(usage)?;
    }
    if let Some((prior, days)) = history {
        factors.time_component = time_component(&HistoryStats::new(prior, days, 0, 0).map_err(usage)?);
    }
    if let Some((participated, won)) = counts {
        factors.experience = experience_score(participated, won).map_err(usage)?;
    }
    let mode = match mode {
        Mode::Raw => WeightMode::Raw,
        Mode::Normalized => WeightMode::Normalized,
    };
    let tiers = StarTiers::default();
    match trust_snapshot(&ledger, &user, &factors, mode, &tiers) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            Ok(())
        }
        Err(SnapshotError::NoPeer { user, baselines }) => {
            println!("{}", serde_json::to_string_pretty(&baselines).expect("reports serialize"));
            Err(Failure::Data(format!("{user} has no rater with overlapping sellers; printed baselines only")))
        }
        Err(e) => Err(Failure::Data(e.to_string())),
    }
}

fn demo_table2() -> Result<(), Failure> {
    let ledger = table_ledger();
    let (x, y) = (uid("x"), uid("y"));
    let mut out = io::stdout().lock();
    let data = |e: auction_trust::trust::TrustError| Failure::Data(e.to_string());
    for seller in ["a", "b", "c", "d"] {
        let r = pair_similarity(&x, &y, &uid(seller), &ledger, WeightMode::Raw).map_err(data)?;
        writeln!(out, "R_{seller}={r:.6}").ok();
    }
    let raw = rater_weight(&x, &ledger, WeightMode::Raw).map_err(data)?;
    let norm = rater_weight(&x, &ledger, WeightMode::Normalized).map_err(data)?;
    writeln!(out, "W_x(raw)={raw:.6}").ok();
    writeln!(out, "W_x(norm)={norm:.6}").ok();
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate {
            config,
            reps,
            seed,
            out,
            allow_unknown,
        } => simulate(&config, reps, seed, &out, allow_unknown),
        Command::Trust {
            ledger,
            user,
            mode,
            final_price,
            optimal_price,
            prior_feedback,
            days_since_last,
            participated,
            won,
            shape,
        } => trust(
            &ledger,
            &user,
            mode,
            final_price.zip(optimal_price),
            prior_feedback.zip(days_since_last),
            participated.zip(won),
            &shape,
        ),
        Command::DemoTable2 => demo_table2(),
        Command::Baselines { ledger, user, shape } => {
            let user = parse_user(&user)?;
            let ledger = open_ledger(&ledger, &shape)?;
            println!("{}", serde_json::to_string_pretty(&baselines(&ledger, &user, &StarTiers::default())).expect("reports serialize"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Data(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

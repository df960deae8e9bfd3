use auction_trust::agents::BidderMode;
use auction_trust::harness::{
    parse_config, run_arm, run_auction, run_experiment, simulate_to_dir, post_auction_feedback, Arm,
    FeedbackModel, ScenarioConfig, RUNS_HEADER,
};
use auction_trust::ledger::LegacyVote;
use auction_trust::rng::SimRng;
use auction_trust::stats::{mean, std_error};
use auction_trust::{Money, UserId};

fn uid(s: &str) -> UserId {
    UserId::new(s).unwrap()
}

fn config(text: &str) -> ScenarioConfig {
    parse_config(text, false).unwrap()
}

#[test]
fn english_two_agents() {
    let c = config(
        r#"{"protocol":"english","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"A","threshold":100},{"id":"B","threshold":80}],
            "start_price":50,"increment":5,"n_days":5,"seed":0}"#,
    );
    let r = run_auction(&c).unwrap();
    assert_eq!(r.outcome.winner, Some(uid("A")));
    // A polled first ends on the lower threshold; B first costs one more step.
    let expected = if r.poll_order[0] == uid("A") { 80 } else { 85 };
    assert_eq!(r.outcome.price, Money(expected));
    assert_eq!(r.interactions_total(), 2);
}

#[test]
fn english_poll_order_matches_worked_example() {
    let text = |seed: u64| {
        format!(
            r#"{{"protocol":"english","seller":{{"id":"s","quality":0.8}},
                "bidders":[{{"id":"A","threshold":100}},{{"id":"B","threshold":80}}],
                "start_price":50,"increment":5,"n_days":5,"seed":{seed}}}"#
        )
    };
    let seed = (0..100)
        .find(|&s| run_auction(&config(&text(s))).unwrap().poll_order[0] == uid("A"))
        .unwrap();
    let r = run_auction(&config(&text(seed))).unwrap();
    assert_eq!((r.outcome.winner, r.outcome.price), (Some(uid("A")), Money(80)));
}

#[test]
fn dutch_single_agent_sells_at_tick_four() {
    let c = config(
        r#"{"protocol":"dutch","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"A","threshold":100,"accept_range":[60,80]}],
            "start_price":100,"decrement":5,"n_days":5}"#,
    );
    let r = run_auction(&c).unwrap();
    assert_eq!(r.outcome.closing_tick, 4);
    assert_eq!(r.outcome.price, Money(80));
    assert_eq!(r.duration_ticks, 5);
    assert_eq!(r.missed_crossings_total(), 0);
}

#[test]
fn identical_seeds_identical_results() {
    let c = config(
        r#"{"protocol":"english","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"A","mode":"manual","threshold":{"uniform":[60,140]},"attendance_prob":0.4},
                       {"id":"B","mode":"manual","threshold":{"uniform":[60,140]},"attendance_prob":0.6},
                       {"id":"C","threshold":{"uniform":[60,140]}}],
            "start_price":50,"n_days":3,"priority":0.7,"seed":99}"#,
    );
    assert_eq!(run_auction(&c).unwrap(), run_auction(&c).unwrap());
}

#[test]
fn seed_42_manual_misses_the_crossing() {
    let c = config(
        r#"{"protocol":"dutch","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"m","mode":"manual","threshold":100,"accept_range":[70,80],"attendance_prob":0.3}],
            "start_price":100,"decrement":5,"n_days":2,"seed":42}"#,
    );
    let manual = run_auction(&c).unwrap();
    assert_eq!(manual.missed_crossings[&uid("m")], 1);
    assert!(!manual.outcome.is_sale());
    assert_eq!(manual.duration_ticks, 20);

    let agent = run_arm(&c, 42, BidderMode::Agent).unwrap();
    assert_eq!(agent.outcome.price, Money(80));
    assert_eq!(agent.missed_crossings_total(), 0);
}

#[test]
fn manual_interactions_track_attendance() {
    let c = config(
        r#"{"protocol":"english","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"A","threshold":{"uniform":[60,140]},"attendance_prob":0.3},
                       {"id":"B","threshold":{"uniform":[60,140]},"attendance_prob":0.3}],
            "start_price":50,"n_days":4,"seed":7}"#,
    );
    let report = run_experiment(&c, 1000).unwrap();
    let mut ratios = Vec::new();
    for (agent, manual) in &report.pairs {
        assert!(agent.interaction_counts.values().all(|&n| n == 1));
        for &n in manual.interaction_counts.values() {
            ratios.push(n as f64 - 0.3 * manual.duration_ticks as f64);
        }
    }
    let m = mean(&ratios);
    assert!(m.abs() <= 3.0 * std_error(&ratios), "mean deviation {m}");
}

#[test]
fn conservation_of_sales() {
    for protocol in ["english", "dutch", "vickrey"] {
        let c = config(&format!(
            r#"{{"protocol":"{protocol}","seller":{{"id":"s","quality":0.6}},
                "bidders":[{{"id":"A","threshold":{{"uniform":[60,140]}},"attendance_prob":0.5,"submit_prob":0.8}},
                           {{"id":"B","threshold":{{"uniform":[60,140]}},"attendance_prob":0.5,"submit_prob":0.8}},
                           {{"id":"C","threshold":{{"uniform":[60,140]}},"attendance_prob":0.5,"submit_prob":0.8}}],
                "start_price":150,"decrement":5,"reserve":20,"n_days":5,"seed":3}}"#
        ));
        let c = if protocol == "english" {
            ScenarioConfig { start_price: Money(40), ..c }
        } else {
            c
        };
        let report = run_experiment(&c, 300).unwrap();
        for r in report.runs() {
            assert!(r.duration_ticks <= c.deadline_ticks());
            if let Some(price) = r.final_price() {
                let top = *r.thresholds.values().max().unwrap();
                assert!(price >= c.reserve && price <= top, "{protocol}: {price} vs {top}");
                assert!(r.thresholds.contains_key(r.outcome.winner.as_ref().unwrap()));
            }
            if r.arm == Arm::Agent {
                assert_eq!(r.missed_crossings_total(), 0);
                assert_eq!(r.missed_submissions, 0);
            }
        }
    }
}

#[test]
fn matched_pairs_share_valuations_and_order() {
    let c = config(
        r#"{"protocol":"vickrey","seller":{"id":"s","quality":0.5},
            "bidders":[{"id":"A","threshold":{"uniform":[60,140]}},{"id":"B","threshold":{"uniform":[60,140]}}],
            "start_price":50,"n_days":1,"priority":1.0,"seed":10}"#,
    );
    let report = run_experiment(&c, 50).unwrap();
    for (a, m) in &report.pairs {
        assert_eq!(a.seed, m.seed);
        assert_eq!(a.thresholds, m.thresholds);
        assert_eq!(a.poll_order, m.poll_order);
        assert_eq!(a.optimal_price_realized, m.optimal_price_realized);
        assert_eq!((a.arm, m.arm), (Arm::Agent, Arm::Manual));
    }
    assert_eq!(report.summary.replications, 50);
    assert_eq!(report.summary.base_seed, 10);
}

#[test]
fn feedback_lands_in_arm_ledgers() {
    let c = config(
        r#"{"protocol":"english","seller":{"id":"s","quality":0.9},
            "bidders":[{"id":"A","threshold":{"uniform":[60,140]}},{"id":"B","threshold":{"uniform":[60,140]}}],
            "start_price":50,"n_days":1,"seed":1}"#,
    );
    let report = run_experiment(&c, 40).unwrap();
    let sold = report.pairs.iter().filter(|(a, _)| a.outcome.is_sale()).count();
    assert_eq!(report.agent_ledger.len(), sold);
    assert!(report
        .agent_ledger
        .votes_for(&uid("s"))
        .iter()
        .all(|v| *v != LegacyVote::Negative));
}

#[test]
fn mid_quality_feedback_replays() {
    let c = config(
        r#"{"protocol":"english","seller":{"id":"s","quality":0.5},
            "bidders":[{"id":"A","threshold":90}],"start_price":50,"n_days":1,"seed":7}"#,
    );
    let r = run_auction(&c).unwrap();
    let model = FeedbackModel::from_config(&c);
    let draw = || post_auction_feedback(&r, 0.5, &model, 0, &mut SimRng::new(7)).unwrap();
    let first = draw();
    assert_eq!(first, draw());
    for x in &first[0].ratings {
        assert!((0.0..=5.0).contains(x));
    }
}

#[test]
fn csv_files_written() {
    let c = config(
        r#"{"protocol":"dutch","seller":{"id":"s","quality":0.8},
            "bidders":[{"id":"A","threshold":100,"accept_range":[60,80],"attendance_prob":0.3}],
            "start_price":100,"n_days":2,"seed":5}"#,
    );
    let dir = tempfile::tempdir().unwrap();
    simulate_to_dir(&c, 10, dir.path()).unwrap();
    let runs = std::fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    let mut lines = runs.lines();
    assert_eq!(lines.next().unwrap(), RUNS_HEADER.join(","));
    assert_eq!(lines.count(), 20);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}

//! Worked-example ledger: buyers x, y, z, w and sellers a..e.
//!
//! Win marks:
//!
//! |   | a | b | c | d | e |
//! |---|---|---|---|---|---|
//! | x | * | * | * | * |   |
//! | y | * | * | * | * | * |
//! | z | * |   | * |   | * |
//! | w |   | * |   | * | * |
//!
//! The x and y ratings for a..d are the published three-attribute values.
//! Ratings in cells with no published value (y for e, every z and w cell)
//! are illustrative fillers; only their existence matters for the win sets.

use crate::ledger::{FeedbackLedger, FeedbackRecord, LedgerConfig, LegacyVote};
use crate::types::{Money, UserId};

/// Builds a `UserId` from a literal. Panics on an empty string.
pub fn uid(id: &str) -> UserId {
    UserId::new(id).expect("literal user ids are non-empty")
}

/// (rater, seller, c1, c2, c3)
pub const TABLE_RATINGS: &[(&str, &str, [f64; 3])] = &[
    ("x", "a", [3.5, 4.0, 5.0]),
    ("x", "b", [3.0, 5.0, 2.0]),
    ("x", "c", [5.0, 5.0, 5.0]),
    ("x", "d", [1.0, 4.5, 4.0]),
    ("y", "a", [4.0, 2.0, 4.0]),
    ("y", "b", [2.5, 4.0, 3.0]),
    ("y", "c", [1.0, 0.0, 5.0]),
    ("y", "d", [2.0, 5.0, 4.0]),
    ("y", "e", [3.0, 3.0, 3.0]),
    ("z", "a", [4.0, 4.0, 4.0]),
    ("z", "c", [2.0, 3.0, 4.0]),
    ("z", "e", [5.0, 4.0, 3.0]),
    ("w", "b", [1.0, 2.0, 3.0]),
    ("w", "d", [3.0, 3.0, 2.0]),
    ("w", "e", [4.0, 4.0, 5.0]),
];

pub fn table_records() -> Vec<FeedbackRecord> {
    TABLE_RATINGS
        .iter()
        .enumerate()
        .map(|(i, (rater, seller, ratings))| FeedbackRecord {
            rater: uid(rater),
            seller: uid(seller),
            auction_id: format!("auc-{rater}-{seller}"),
            ratings: ratings.to_vec(),
            transaction_value: Money(100),
            timestamp: i as u32,
            legacy_vote: LegacyVote::Positive,
        })
        .collect()
}

/// Ledger holding [`TABLE_RATINGS`] on a 0..5, three-attribute scale.
pub fn table_ledger() -> FeedbackLedger {
    let config = LedgerConfig::new(
        vec!["c1".to_string(), "c2".to_string(), "c3".to_string()],
        5.0,
    )
    .expect("static config is valid");
    let mut ledger = FeedbackLedger::new(config);
    for record in table_records() {
        ledger
            .record_feedback(record)
            .expect("fixture records are valid");
    }
    ledger
}

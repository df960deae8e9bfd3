//! Rater weight from rating similarity with the best-matching peer.

use crate::ledger::{FeedbackLedger, LedgerError};
use crate::types::UserId;

use super::TrustError;

/// Whether ratings are used on their stored 0..scale_max axis or divided by
/// `scale_max` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    Raw,
    #[default]
    Normalized,
}

/// `sum(x_i * y_i) / (|sum x_i| + |sum y_i|)` for two rating vectors.
pub fn similarity(x: &[f64], y: &[f64]) -> Option<f64> {
    debug_assert_eq!(x.len(), y.len());
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let denom = sx.abs() + sy.abs();
    if denom == 0.0 {
        None
    } else {
        Some(dot / denom)
    }
}

/// Element-wise mean of one rater's vectors for one seller, scaled for `mode`.
fn rating_profile(
    ledger: &FeedbackLedger,
    rater: &UserId,
    seller: &UserId,
    mode: WeightMode,
) -> Result<Vec<f64>, TrustError> {
    let lookup = ledger
        .lookup_ratings(rater, seller, None)
        .map_err(|e| match e {
            LedgerError::NotFound { rater, seller } => TrustError::MissingRatings { rater, seller },
            other => TrustError::Ledger(other),
        })?;
    let n = lookup.ratings.len() as f64;
    let width = lookup.ratings[0].len();
    let scale = match mode {
        WeightMode::Raw => 1.0,
        WeightMode::Normalized => ledger.config().scale_max(),
    };
    let mut mean = vec![0.0; width];
    for vector in &lookup.ratings {
        for (m, r) in mean.iter_mut().zip(vector) {
            *m += r;
        }
    }
    for m in &mut mean {
        *m /= n * scale;
    }
    Ok(mean)
}

/// Similarity of the ratings `x` and `y` gave `seller`.
pub fn pair_similarity(
    x: &UserId,
    y: &UserId,
    seller: &UserId,
    ledger: &FeedbackLedger,
    mode: WeightMode,
) -> Result<f64, TrustError> {
    let rx = rating_profile(ledger, x, seller, mode)?;
    let ry = rating_profile(ledger, y, seller, mode)?;
    if rx.len() != ry.len() {
        return Err(TrustError::LengthMismatch {
            left: rx.len(),
            right: ry.len(),
        });
    }
    similarity(&rx, &ry).ok_or_else(|| TrustError::ZeroDenominator {
        seller: seller.clone(),
    })
}

/// Breakdown of a rater-weight computation.
#[derive(Debug, Clone, PartialEq)]
pub struct RaterWeight {
    pub peer: UserId,
    /// Similarity per common seller, in seller order.
    pub per_seller: Vec<(UserId, f64)>,
    pub weight: f64,
}

pub fn rater_weight_detail(
    x: &UserId,
    ledger: &FeedbackLedger,
    mode: WeightMode,
) -> Result<RaterWeight, TrustError> {
    let peer = ledger
        .select_peer(x)
        .ok_or_else(|| TrustError::NoPeer(x.clone()))?;
    let common = ledger.common_partners(x, &peer);
    let per_seller = common
        .into_iter()
        .map(|seller| {
            let r = pair_similarity(x, &peer, &seller, ledger, mode)?;
            Ok((seller, r))
        })
        .collect::<Result<Vec<_>, TrustError>>()?;
    let weight = per_seller.iter().map(|(_, r)| r).sum::<f64>() / per_seller.len() as f64;
    Ok(RaterWeight {
        peer,
        per_seller,
        weight,
    })
}

/// Mean similarity between `x` and its peer over their common sellers.
pub fn rater_weight(x: &UserId, ledger: &FeedbackLedger, mode: WeightMode) -> Result<f64, TrustError> {
    rater_weight_detail(x, ledger, mode).map(|w| w.weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{table_ledger, uid};
    use crate::ledger::{FeedbackRecord, LedgerConfig, LegacyVote};
    use crate::types::Money;
    use proptest::prelude::*;

    // Exact rationals for the fixture rows, computed by hand.
    const R_A: f64 = 42.0 / 22.5;
    const R_B: f64 = 33.5 / 19.5;
    const R_C: f64 = 30.0 / 21.0;
    const R_D: f64 = 40.5 / 20.5;

    #[test]
    fn similarity_of_published_rows() {
        assert!((similarity(&[3.5, 4.0, 5.0], &[4.0, 2.0, 4.0]).unwrap() - 1.866_666_666_666_667).abs() < 1e-9);
        assert!((similarity(&[5.0, 5.0, 5.0], &[1.0, 0.0, 5.0]).unwrap() - 1.428_571_428_571_428_6).abs() < 1e-9);
        assert_eq!(similarity(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]), Some(0.5));
        assert_eq!(similarity(&[0.0, 0.0], &[0.0, 0.0]), None);
    }

    #[test]
    fn negative_ratings_use_absolute_sums() {
        let r = similarity(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(r, -2.0 / 4.0);
    }

    #[test]
    fn pair_similarity_over_ledger() {
        let ledger = table_ledger();
        let (x, y) = (uid("x"), uid("y"));
        for (seller, want) in [("a", R_A), ("b", R_B), ("c", R_C), ("d", R_D)] {
            let got = pair_similarity(&x, &y, &uid(seller), &ledger, WeightMode::Raw).unwrap();
            assert!((got - want).abs() < 1e-12, "{seller}: {got}");
        }
        let err = pair_similarity(&x, &y, &uid("e"), &ledger, WeightMode::Raw).unwrap_err();
        assert!(matches!(err, TrustError::MissingRatings { .. }));
    }

    #[test]
    fn zero_rating_sums_are_an_error() {
        let mut ledger = FeedbackLedger::new(LedgerConfig::with_attribute_count(2, 5.0).unwrap());
        for rater in ["p", "q"] {
            ledger
                .record_feedback(FeedbackRecord {
                    rater: uid(rater),
                    seller: uid("s"),
                    auction_id: "1".into(),
                    ratings: vec![0.0, 0.0],
                    transaction_value: Money(1),
                    timestamp: 0,
                    legacy_vote: LegacyVote::Neutral,
                })
                .unwrap();
        }
        let err = pair_similarity(&uid("p"), &uid("q"), &uid("s"), &ledger, WeightMode::Raw).unwrap_err();
        assert!(matches!(err, TrustError::ZeroDenominator { .. }));
    }

    #[test]
    fn table_weight_raw_and_normalized() {
        let ledger = table_ledger();
        let detail = rater_weight_detail(&uid("x"), &ledger, WeightMode::Raw).unwrap();
        assert_eq!(detail.peer, uid("y"));
        assert_eq!(detail.per_seller.len(), 4);
        let raw = detail.weight;
        assert!((raw - 1.747_199).abs() < 1e-6);
        assert!((raw - (R_A + R_B + R_C + R_D) / 4.0).abs() < 1e-12);
        let norm = rater_weight(&uid("x"), &ledger, WeightMode::Normalized).unwrap();
        assert!((norm - 0.349_440).abs() < 1e-6);
        assert!((norm - raw / 5.0).abs() < 1e-12);
    }

    #[test]
    fn no_peer_for_isolated_rater() {
        let mut ledger = FeedbackLedger::new(LedgerConfig::default());
        ledger
            .record_feedback(FeedbackRecord {
                rater: uid("x"),
                seller: uid("a"),
                auction_id: "1".into(),
                ratings: vec![1.0, 2.0, 3.0],
                transaction_value: Money(1),
                timestamp: 0,
                legacy_vote: LegacyVote::Positive,
            })
            .unwrap();
        assert!(matches!(
            rater_weight(&uid("x"), &ledger, WeightMode::Raw),
            Err(TrustError::NoPeer(_))
        ));
    }

    #[test]
    fn repeated_ratings_are_averaged() {
        let mut ledger = FeedbackLedger::new(LedgerConfig::with_attribute_count(1, 5.0).unwrap());
        for (rater, auction, r) in [("x", "1", 1.0), ("x", "2", 3.0), ("y", "3", 2.0)] {
            ledger
                .record_feedback(FeedbackRecord {
                    rater: uid(rater),
                    seller: uid("s"),
                    auction_id: auction.into(),
                    ratings: vec![r],
                    transaction_value: Money(1),
                    timestamp: 0,
                    legacy_vote: LegacyVote::Positive,
                })
                .unwrap();
        }
        // mean(x) = 2, y = 2 -> 4 / 4
        let r = pair_similarity(&uid("x"), &uid("y"), &uid("s"), &ledger, WeightMode::Raw).unwrap();
        assert_eq!(r, 1.0);
    }

    fn random_ledger(scale_max: f64) -> impl Strategy<Value = FeedbackLedger> {
        let cell = (0usize..5, 0usize..4, proptest::collection::vec(0.0..=1.0f64, 3));
        proptest::collection::vec(cell, 1..40).prop_map(move |cells| {
            let mut ledger =
                FeedbackLedger::new(LedgerConfig::with_attribute_count(3, scale_max).unwrap());
            for (rater, seller, ratings) in cells {
                let ratings = ratings.iter().map(|r| r * scale_max).collect();
                ledger
                    .record_feedback(FeedbackRecord {
                        rater: uid(&format!("u{rater}")),
                        seller: uid(&format!("s{seller}")),
                        auction_id: format!("{rater}-{seller}"),
                        ratings,
                        transaction_value: Money(1),
                        timestamp: 0,
                        legacy_vote: LegacyVote::Neutral,
                    })
                    .unwrap();
            }
            ledger
        })
    }

    proptest! {
        #[test]
        fn normalized_weight_is_raw_over_scale(ledger in random_ledger(5.0)) {
            for user in ledger.raters() {
                let raw = rater_weight(&user, &ledger, WeightMode::Raw);
                let norm = rater_weight(&user, &ledger, WeightMode::Normalized);
                match (raw, norm) {
                    (Ok(raw), Ok(norm)) => prop_assert!((norm - raw / 5.0).abs() < 1e-12),
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "modes disagree: {a:?} vs {b:?}"),
                }
            }
        }

        #[test]
        fn unit_scale_similarity_is_at_most_half(
            x in proptest::collection::vec(0.0..=1.0f64, 1..6),
            y_seed in proptest::collection::vec(0.0..=1.0f64, 6),
        ) {
            let y = &y_seed[..x.len()];
            if let Some(r) = similarity(&x, y) {
                prop_assert!((0.0..=0.5 + 1e-15).contains(&r), "{r}");
            }
        }

        #[test]
        fn unit_scale_weight_is_at_most_half(ledger in random_ledger(1.0)) {
            for user in ledger.raters() {
                if let Ok(w) = rater_weight(&user, &ledger, WeightMode::Raw) {
                    prop_assert!((0.0..=0.5 + 1e-15).contains(&w));
                }
            }
        }

        #[test]
        fn common_partners_symmetric(ledger in random_ledger(5.0)) {
            let raters: Vec<_> = ledger.raters().into_iter().collect();
            for a in &raters {
                for b in &raters {
                    prop_assert_eq!(ledger.common_partners(a, b), ledger.common_partners(b, a));
                }
            }
        }
    }
}

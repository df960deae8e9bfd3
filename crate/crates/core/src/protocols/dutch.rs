use crate::types::{Money, Tick, UserId};

use super::{AuctionError, AuctionOutcome};

/// Descending clock: the price drops by `decrement` per tick down to the
/// reserve, and the first acceptance buys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DutchAuction {
    start_price: Money,
    decrement: Money,
    reserve: Money,
    sold: Option<AuctionOutcome>,
}

impl DutchAuction {
    pub fn new(start_price: Money, decrement: Money, reserve: Money) -> Result<Self, AuctionError> {
        if decrement <= Money::ZERO {
            return Err(AuctionError::InvalidParams("decrement must be positive".into()));
        }
        if reserve < Money::ZERO || reserve > start_price {
            return Err(AuctionError::InvalidParams(
                "reserve must lie in [0, start_price]".into(),
            ));
        }
        Ok(Self {
            start_price,
            decrement,
            reserve,
            sold: None,
        })
    }

    pub fn reserve(&self) -> Money {
        self.reserve
    }

    pub fn price_at(&self, tick: Tick) -> Money {
        let dropped = self.start_price.units() - self.decrement.units() * tick as i64;
        Money(dropped.max(self.reserve.units()))
    }

    pub fn sold(&self) -> Option<&AuctionOutcome> {
        self.sold.as_ref()
    }

    pub fn accept(&mut self, bidder: UserId, tick: Tick) -> Result<AuctionOutcome, AuctionError> {
        if self.sold.is_some() {
            return Err(AuctionError::AlreadySold);
        }
        let outcome = AuctionOutcome {
            winner: Some(bidder),
            price: self.price_at(tick),
            closing_tick: tick,
        };
        self.sold = Some(outcome.clone());
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::uid;
    use proptest::prelude::*;

    #[test]
    fn clock_schedule() {
        let d = DutchAuction::new(Money(100), Money(5), Money(40)).unwrap();
        assert_eq!(d.price_at(0), Money(100));
        assert_eq!(d.price_at(4), Money(80));
        assert_eq!(d.price_at(13), Money(40));
        assert_eq!(d.price_at(1000), Money(40));
    }

    #[test]
    fn single_sale() {
        let mut d = DutchAuction::new(Money(100), Money(5), Money(0)).unwrap();
        let out = d.accept(uid("A"), 4).unwrap();
        assert_eq!(out.price, Money(80));
        assert_eq!(out.winner, Some(uid("A")));
        assert_eq!(d.accept(uid("B"), 5), Err(AuctionError::AlreadySold));
        assert_eq!(d.sold().unwrap().winner, Some(uid("A")));
    }

    #[test]
    fn accept_past_floor_pays_reserve() {
        let mut d = DutchAuction::new(Money(100), Money(5), Money(40)).unwrap();
        assert_eq!(d.accept(uid("A"), 50).unwrap().price, Money(40));
    }

    #[test]
    fn params_checked() {
        assert!(DutchAuction::new(Money(100), Money(0), Money(0)).is_err());
        assert!(DutchAuction::new(Money(100), Money(5), Money(120)).is_err());
    }

    proptest! {
        #[test]
        fn price_non_increasing_and_floored(
            start in 0i64..10_000, dec in 1i64..500, reserve_frac in 0.0..=1.0f64, t in 0u32..1000,
        ) {
            let reserve = Money((start as f64 * reserve_frac) as i64);
            let d = DutchAuction::new(Money(start), Money(dec), reserve).unwrap();
            prop_assert!(d.price_at(t + 1) <= d.price_at(t));
            prop_assert!(d.price_at(t) >= reserve);
            let mut d2 = d.clone();
            let sale = d2.accept(uid("A"), t).unwrap();
            prop_assert_eq!(sale.price, d.price_at(t));
        }
    }
}

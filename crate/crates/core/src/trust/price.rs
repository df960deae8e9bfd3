//! Seller-side optimal price forecast and its weight.

use super::TrustError;

/// Inputs of the optimal-price forecast. `noise_draws` holds one uniform
/// `[0, 1]` draw per day.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPriceParams {
    initial_price: f64,
    priority: f64,
    noise_draws: Vec<f64>,
}

impl OptimalPriceParams {
    pub fn new(
        initial_price: f64,
        priority: f64,
        n_days: u32,
        noise_draws: Vec<f64>,
    ) -> Result<Self, TrustError> {
        if !(initial_price.is_finite() && initial_price > 0.0) {
            return Err(TrustError::InvalidParams(format!(
                "initial price must be positive, got {initial_price}"
            )));
        }
        if !(0.0..=1.0).contains(&priority) {
            return Err(TrustError::InvalidParams(format!(
                "priority must lie in [0, 1], got {priority}"
            )));
        }
        if n_days == 0 {
            return Err(TrustError::InvalidParams("n_days must be at least 1".into()));
        }
        if noise_draws.len() != n_days as usize {
            return Err(TrustError::InvalidParams(format!(
                "expected {n_days} noise draws, got {}",
                noise_draws.len()
            )));
        }
        if let Some(bad) = noise_draws.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(TrustError::InvalidParams(format!(
                "noise draw {bad} outside [0, 1]"
            )));
        }
        Ok(Self {
            initial_price,
            priority,
            noise_draws,
        })
    }

    pub fn initial_price(&self) -> f64 {
        self.initial_price
    }

    pub fn priority(&self) -> f64 {
        self.priority
    }

    pub fn n_days(&self) -> u32 {
        self.noise_draws.len() as u32
    }
}

/// `initial + sum over days of (0.1 * initial - (draw - 0.5) * priority)`.
pub fn optimal_price(params: &OptimalPriceParams) -> f64 {
    let daily_growth = 0.1 * params.initial_price;
    params.initial_price
        + params
            .noise_draws
            .iter()
            .map(|draw| daily_growth - (draw - 0.5) * params.priority)
            .sum::<f64>()
}

/// Mean of [`optimal_price`] when each draw is uniform on `[0, 1]`.
pub fn expected_optimal_price(initial_price: f64, n_days: u32) -> Result<f64, TrustError> {
    if n_days == 0 {
        return Err(TrustError::InvalidParams("n_days must be at least 1".into()));
    }
    Ok(initial_price * (1.0 + 0.1 * n_days as f64))
}

/// Realized price as a fraction of the forecast, clamped to `[0, 1]`.
pub fn optimal_price_weight(final_price: f64, optimal: f64) -> Result<f64, TrustError> {
    if optimal.is_nan() || optimal <= 0.0 {
        return Err(TrustError::NonPositiveOptimal(optimal));
    }
    Ok((final_price / optimal).clamp(0.0, 1.0))
}

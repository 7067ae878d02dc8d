//! Prediction-consuming reservation policies behind one trait, so the
//! adversary module can probe and execute them as black boxes.

use crate::error::Result;
use crate::predictor::{ora_reservation, robust_mix_reservation, BestPricePrediction, ErrorBounds};
use crate::search::{on_star_reservation, run_reservation, PriceBounds, PriceSequence, TradeOutcome};

/// A deterministic policy that turns a prediction into a single reservation
/// price and accepts the first revealed price at or above it (the same rule
/// on every day). Implementations must be reentrant: probing evaluates
/// `accepts_day1` many times.
pub trait ReservationPolicy {
    fn reservation_price(&self, prediction: BestPricePrediction, bounds: PriceBounds) -> f64;

    fn accepts_day1(&self, prediction: BestPricePrediction, bounds: PriceBounds, price: f64) -> bool {
        price >= self.reservation_price(prediction, bounds)
    }
}

/// The oblivious reservation algorithm with reservation r * p.
#[derive(Debug, Clone, Copy)]
pub struct OraPolicy {
    r: f64,
}

impl OraPolicy {
    pub fn new(r: f64) -> Result<Self> {
        // Reuse the parameter validation of the reservation formula.
        ora_reservation(BestPricePrediction::new(1.0)?, r)?;
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

impl ReservationPolicy for OraPolicy {
    fn reservation_price(&self, prediction: BestPricePrediction, _bounds: PriceBounds) -> f64 {
        self.r * prediction.value()
    }
}

/// The non-oblivious algorithm: p * (1 - H_n) or the classical fallback.
#[derive(Debug, Clone, Copy)]
pub struct RobustMixPolicy {
    error_bounds: ErrorBounds,
}

impl RobustMixPolicy {
    pub fn new(error_bounds: ErrorBounds) -> Self {
        Self { error_bounds }
    }

    pub fn error_bounds(&self) -> ErrorBounds {
        self.error_bounds
    }
}

impl ReservationPolicy for RobustMixPolicy {
    fn reservation_price(&self, prediction: BestPricePrediction, bounds: PriceBounds) -> f64 {
        robust_mix_reservation(prediction, bounds, &self.error_bounds)
    }
}

/// The prediction-free baseline with reservation sqrt(m * M).
#[derive(Debug, Clone, Copy, Default)]
pub struct OnStarPolicy;

impl ReservationPolicy for OnStarPolicy {
    fn reservation_price(&self, _prediction: BestPricePrediction, bounds: PriceBounds) -> f64 {
        on_star_reservation(bounds)
    }
}

/// Plays a policy on a full sequence.
pub fn run_policy(
    policy: &dyn ReservationPolicy,
    prediction: BestPricePrediction,
    seq: &PriceSequence,
) -> Result<TradeOutcome> {
    run_reservation(seq, policy.reservation_price(prediction, seq.bounds()))
}

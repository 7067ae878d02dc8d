//! The online search game itself: a price sequence is revealed day by day,
//! the player holds one asset and must sell exactly once. A reservation
//! policy accepts the first price at or above its threshold; if no price
//! qualifies, the last price is accepted by default.
//!
//! Profit is the accepted price; performance is measured as the ratio of the
//! best price in the sequence to the accepted one.

use crate::error::{Error, Result};

/// Known lower and upper bounds on all prices in a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceBounds {
    min: f64,
    max: f64,
}

impl PriceBounds {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || min <= 0.0 || max < min {
            return Err(Error::InvalidInput(format!(
                "price bounds must satisfy 0 < m <= M, got m={min}, M={max}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// The spread M/m that competitive ratios are expressed in.
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }

    /// sqrt(M/m), the best deterministic ratio without predictions.
    pub fn sqrt_spread(&self) -> f64 {
        (self.max / self.min).sqrt()
    }

    pub fn contains(&self, price: f64) -> bool {
        price >= self.min && price <= self.max
    }
}

/// An ordered, non-empty sequence of prices, all within known bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSequence {
    prices: Vec<f64>,
    bounds: PriceBounds,
}

impl PriceSequence {
    pub fn new(prices: Vec<f64>, bounds: PriceBounds) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::InvalidInput("price sequence must be non-empty".into()));
        }
        for (i, &p) in prices.iter().enumerate() {
            if !p.is_finite() || !bounds.contains(p) {
                return Err(Error::InvalidInput(format!(
                    "price {p} on day {} lies outside bounds [{}, {}]",
                    i + 1,
                    bounds.min(),
                    bounds.max()
                )));
            }
        }
        Ok(Self { prices, bounds })
    }

    /// Builds a sequence whose bounds are its own minimum and maximum.
    pub fn from_prices(prices: Vec<f64>) -> Result<Self> {
        if prices.is_empty() {
            return Err(Error::InvalidInput("price sequence must be non-empty".into()));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &p in &prices {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidInput(format!("prices must be positive and finite, got {p}")));
            }
            min = min.min(p);
            max = max.max(p);
        }
        let bounds = PriceBounds::new(min, max)?;
        Ok(Self { prices, bounds })
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        false // guaranteed non-empty at construction
    }

    pub fn bounds(&self) -> PriceBounds {
        self.bounds
    }
}

/// The result of playing one sequence: which price was taken and when.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeOutcome {
    /// The accepted price (the profit).
    pub accepted_price: f64,
    /// 1-based day of acceptance.
    pub accept_day: usize,
    /// True when no price reached the reservation and the last day was taken
    /// by default.
    pub forced_last_day: bool,
}

/// best price / accepted price, always at least 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceRatio {
    value: f64,
}

impl PerformanceRatio {
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Plays a reservation policy: accepts the first price `>= reservation`
/// (equality accepts), else the last price by default.
///
/// The reservation may lie outside `[m, M]`: below m it degenerates to
/// accepting day 1, above M to the forced last-day acceptance.
pub fn run_reservation(seq: &PriceSequence, reservation: f64) -> Result<TradeOutcome> {
    if !reservation.is_finite() || reservation <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "reservation price must be positive and finite, got {reservation}"
        )));
    }
    for (i, &p) in seq.prices().iter().enumerate() {
        if p >= reservation {
            return Ok(TradeOutcome {
                accepted_price: p,
                accept_day: i + 1,
                forced_last_day: false,
            });
        }
    }
    Ok(TradeOutcome {
        accepted_price: *seq.prices().last().expect("sequence is non-empty"),
        accept_day: seq.len(),
        forced_last_day: true,
    })
}

/// The best (maximum) price in the sequence.
pub fn best_price(seq: &PriceSequence) -> f64 {
    seq.prices().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// best price / accepted price for an outcome produced from `seq`.
pub fn competitive_ratio(seq: &PriceSequence, outcome: &TradeOutcome) -> Result<PerformanceRatio> {
    if outcome.accept_day == 0 || outcome.accept_day > seq.len() {
        return Err(Error::InvalidInput(format!(
            "accept day {} outside sequence of length {}",
            outcome.accept_day,
            seq.len()
        )));
    }
    if seq.prices()[outcome.accept_day - 1] != outcome.accepted_price {
        return Err(Error::InvalidInput(
            "outcome does not match the sequence it claims to come from".into(),
        ));
    }
    Ok(PerformanceRatio {
        value: best_price(seq) / outcome.accepted_price,
    })
}

/// The classical prediction-free reservation price sqrt(m*M), whose worst
/// case ratio over sequences in `[m, M]` is sqrt(M/m).
pub fn on_star_reservation(bounds: PriceBounds) -> f64 {
    (bounds.min() * bounds.max()).sqrt()
}

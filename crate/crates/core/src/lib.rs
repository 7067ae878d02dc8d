//! Learning-augmented online time-series search.
//!
//! A player must sell one asset over a horizon of daily prices, accepting
//! exactly one. This crate implements the classical reservation baseline,
//! two best-price-prediction algorithms (an oblivious one parameterized by a
//! threshold factor and a robust non-oblivious mix), query-based prediction
//! via linear and error-tolerant binary interval search, the adversarial
//! instance constructions behind their lower bounds, and a benchmark harness
//! that sweeps prediction error over windowed price data.

pub mod adversary;
pub mod error;
pub mod harness;
pub mod policy;
pub mod predictor;
pub mod query;
pub mod search;

pub use error::{Error, Result};
pub use policy::{OnStarPolicy, OraPolicy, ReservationPolicy, RobustMixPolicy};
pub use predictor::{BestPricePrediction, ErrorBounds, ErrorSpec, Parity};
pub use query::{IntervalPartition, QueryBudget, ResponseOracle, ResponseString, SearchTranscript};
pub use search::{PerformanceRatio, PriceBounds, PriceSequence, TradeOutcome};

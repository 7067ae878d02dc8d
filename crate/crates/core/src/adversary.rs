//! Worst-case instances from the lower-bound constructions, plus a black-box
//! probe that recovers a policy's day-1 acceptance threshold so those
//! instances can be aimed at arbitrary policies.

use crate::error::{Error, Result};
use crate::policy::ReservationPolicy;
use crate::predictor::{ora_bound, BestPricePrediction, ErrorSpec, Parity};
use crate::query::IntervalPartition;
use crate::search::{competitive_ratio, run_reservation, PriceBounds, PriceSequence};

/// Default number of grid points used when probing a policy.
pub const DEFAULT_PROBE_RESOLUTION: u32 = 1 << 20;

/// Default instance length, matching the benchmark windows.
pub const DEFAULT_INSTANCE_LENGTH: usize = 200;

/// The measured day-1 acceptance threshold of a policy, as a ratio to the
/// prediction it was probed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyProbe {
    /// Smallest accepted grid price divided by the prediction; `None` when
    /// the policy rejects every price up to and including M on day 1.
    pub threshold_ratio: Option<f64>,
    /// Number of grid points scanned.
    pub resolution: u32,
    /// Multiplicative step between adjacent grid prices.
    pub grid_step: f64,
}

impl PolicyProbe {
    /// The threshold ratio, with the above-M sentinel mapped to +inf so it
    /// can flow straight into the instance constructions.
    pub fn ratio_or_infinite(&self) -> f64 {
        self.threshold_ratio.unwrap_or(f64::INFINITY)
    }
}

/// Binary-searches a geometric grid of `resolution` prices in `[m, M]` for
/// the smallest day-1 price the policy accepts.
///
/// A full scan is out of the question at realistic resolutions, so threshold
/// structure is checked on a 64-point stride instead; a policy that accepts
/// some price but rejects a higher one on that stride is reported as
/// non-threshold.
pub fn probe_threshold(
    accepts_day1: impl Fn(f64) -> bool,
    prediction: f64,
    bounds: PriceBounds,
    resolution: u32,
) -> Result<PolicyProbe> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "probe resolution must be at least 2, got {resolution}"
        )));
    }
    let grid = IntervalPartition::new(bounds, u64::from(resolution) - 1)?;
    let top = u64::from(resolution) - 1;
    let step = grid.ratio_step();

    let probe = |i: u64| accepts_day1(grid.point(i));

    let threshold_index = if !probe(top) {
        None
    } else if probe(0) {
        Some(0)
    } else {
        // Invariant: probe(lo) = false, probe(hi) = true.
        let (mut lo, mut hi) = (0u64, top);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if probe(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    };

    // Spot-check that observations are consistent with a single threshold.
    let boundary = threshold_index.unwrap_or(top + 1);
    for s in 0..=64u64 {
        let i = s * top / 64;
        if probe(i) != (i >= boundary) {
            return Err(Error::NonThresholdPolicy(format!(
                "day-1 acceptance at grid point {i} contradicts threshold at {boundary}"
            )));
        }
    }

    Ok(PolicyProbe {
        threshold_ratio: threshold_index.map(|i| grid.point(i) / prediction),
        resolution,
        grid_step: step,
    })
}

/// The adversarial sequence from the oblivious lower-bound proof, together
/// with the prediction the adversary commits to.
///
/// Negative parity fixes p = M and p* = (1 - eta) M; positive parity fixes
/// p* = M and p = M / (1 + eta). A policy with day-1 threshold ratio
/// `r_policy` is then served either a day-1 price it just barely accepts, or
/// a sequence that collapses to m after it rejects day 1. Sequences are
/// padded to `length` with repetitions of the final price.
pub fn thm1_instance(
    err: &ErrorSpec,
    r_policy: f64,
    bounds: PriceBounds,
    length: usize,
) -> Result<(PriceSequence, BestPricePrediction)> {
    if length < 2 {
        return Err(Error::InvalidParameter(format!(
            "instance length must be at least 2, got {length}"
        )));
    }
    if !err.feasible_for(bounds) {
        return Err(Error::OutOfRange(format!(
            "error {} {} is infeasible for bounds [{}, {}]",
            err.parity(),
            err.eta(),
            bounds.min(),
            bounds.max()
        )));
    }
    let eta = err.eta();
    let max = bounds.max();

    // Branch predicates mirror ora_bound exactly.
    let (day1, rest, prediction) = match err.parity() {
        Parity::Negative => {
            let p_star = (1.0 - eta) * max;
            if r_policy <= 1.0 - eta {
                (r_policy * max, p_star, max)
            } else {
                (p_star, bounds.min(), max)
            }
        }
        Parity::Positive => {
            let p = max / (1.0 + eta);
            if r_policy <= 1.0 + eta {
                (r_policy * p, max, p)
            } else {
                (max, bounds.min(), p)
            }
        }
    };

    if !bounds.contains(day1) {
        return Err(Error::OutOfRange(format!(
            "day-1 price {day1} for threshold ratio {r_policy} falls outside [{}, {}]",
            bounds.min(),
            bounds.max()
        )));
    }

    let mut prices = Vec::with_capacity(length);
    prices.push(day1);
    prices.resize(length, rest);
    Ok((
        PriceSequence::new(prices, bounds)?,
        BestPricePrediction::new(prediction)?,
    ))
}

/// Probe parameters for [`verify_lower_bound`].
#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub resolution: u32,
    pub instance_length: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_PROBE_RESOLUTION,
            instance_length: DEFAULT_INSTANCE_LENGTH,
        }
    }
}

/// One tightness measurement: a policy run on its own adversarial instance.
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundRun {
    /// Ratio the policy actually realized on the instance.
    pub realized_ratio: f64,
    /// The probed day-1 threshold ratio (infinite when above M).
    pub threshold_ratio: f64,
    /// The adversarial lower bound evaluated at the probed threshold.
    pub probed_bound: f64,
    /// The prediction the adversary committed to.
    pub prediction: f64,
}

/// Probes the policy, builds the matching adversarial instance, and plays
/// the policy on it.
pub fn verify_lower_bound(
    policy: &dyn ReservationPolicy,
    err: &ErrorSpec,
    bounds: PriceBounds,
    config: &ProbeConfig,
) -> Result<LowerBoundRun> {
    // The adversary commits to the prediction first.
    let prediction = match err.parity() {
        Parity::Negative => bounds.max(),
        Parity::Positive => bounds.max() / (1.0 + err.eta()),
    };
    let prediction = BestPricePrediction::new(prediction)?;

    let probe = probe_threshold(
        |price| policy.accepts_day1(prediction, bounds, price),
        prediction.value(),
        bounds,
        config.resolution,
    )?;
    let r_hat = probe.ratio_or_infinite();

    let (instance, _) = thm1_instance(err, r_hat, bounds, config.instance_length)?;
    let outcome = run_reservation(&instance, policy.reservation_price(prediction, bounds))?;
    let realized = competitive_ratio(&instance, &outcome)?.value();

    Ok(LowerBoundRun {
        realized_ratio: realized,
        threshold_ratio: r_hat,
        probed_bound: ora_bound(err, r_hat, bounds),
        prediction: prediction.value(),
    })
}

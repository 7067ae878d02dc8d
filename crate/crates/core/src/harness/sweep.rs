//! Error-sweep experiment drivers: best-price prediction sweeps over an
//! error grid, query sweeps over randomized lie placements, and the
//! prediction-free baselines.
//!
//! All aggregation sums in fixed index order before dividing, and every
//! random draw is seeded from (master seed, instance, eta, trial), so
//! reports are bit-reproducible.

use crate::error::{Error, Result};
use crate::harness::data::InstanceSet;
use crate::harness::report::{derive_seed, ReportRow, SweepReport};
use crate::predictor::{
    robust_mix_reservation, BestPricePrediction, ErrorBounds, Parity,
};
use crate::query::{
    make_oracle, rbis_search, rlis_preprocess, rlis_reservation, rlis_truthful_responses,
    IntervalPartition, QueryBudget, ResponseString,
};
use crate::search::{best_price, on_star_reservation, run_reservation, PriceSequence};

/// A best-price-prediction algorithm under sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BestPriceAlgo {
    Ora { r: f64 },
    RobustMix { bounds: ErrorBounds },
}

impl BestPriceAlgo {
    fn id(&self) -> &'static str {
        match self {
            BestPriceAlgo::Ora { .. } => "ora",
            BestPriceAlgo::RobustMix { .. } => "robustmix",
        }
    }

    /// The value recorded in the report's param column. The protocol sets
    /// H_n = H_p, so the negative cap identifies a robust-mix sweep.
    fn param(&self) -> f64 {
        match self {
            BestPriceAlgo::Ora { r } => *r,
            BestPriceAlgo::RobustMix { bounds } => bounds.h_neg(),
        }
    }
}

/// A query-model algorithm under sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryAlgo {
    Rlis,
    Rbis,
}

impl QueryAlgo {
    fn id(&self) -> &'static str {
        match self {
            QueryAlgo::Rlis => "rlis",
            QueryAlgo::Rbis => "rbis",
        }
    }
}

/// One point of the error grid for best-price sweeps. eta = 0 under either
/// parity means a perfect prediction.
pub type ErrorGridPoint = (Parity, f64);

/// Expands "equally distanced values in [lo, hi]" for one parity.
pub fn expand_error_grid(parity: Parity, lo: f64, hi: f64, steps: usize) -> Result<Vec<ErrorGridPoint>> {
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
        return Err(Error::InvalidParameter(format!(
            "error grid needs 0 <= lo <= hi and at least one step, got {lo}..{hi} x{steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![(parity, lo)]);
    }
    Ok((0..steps)
        .map(|i| (parity, lo + (hi - lo) * i as f64 / (steps - 1) as f64))
        .collect())
}

/// The prediction carrying error (parity, eta) against truth `p_star`, or
/// `None` when it falls outside the instance bounds (infeasible pair).
fn prediction_for(p_star: f64, parity: Parity, eta: f64, seq: &PriceSequence) -> Option<f64> {
    let p = if eta == 0.0 {
        p_star
    } else {
        match parity {
            Parity::Negative => {
                if eta >= 1.0 {
                    return None;
                }
                p_star / (1.0 - eta)
            }
            Parity::Positive => p_star / (1.0 + eta),
        }
    };
    seq.bounds().contains(p).then_some(p)
}

/// Sweeps one best-price algorithm over an error grid, averaging profit over
/// the instance set per grid point. Infeasible (instance, eta) pairs are
/// skipped and counted; robust-mix rows beyond the declared caps are not
/// reported at all.
pub fn sweep_best_price(
    instances: &InstanceSet,
    algo: BestPriceAlgo,
    grid: &[ErrorGridPoint],
) -> Result<SweepReport> {
    if instances.is_empty() {
        return Err(Error::InvalidInput("instance set is empty".into()));
    }
    let mut rows = Vec::new();
    for &(parity, eta) in grid {
        if let BestPriceAlgo::RobustMix { bounds } = &algo {
            let cap = match parity {
                Parity::Negative => bounds.h_neg(),
                Parity::Positive => bounds.h_pos(),
            };
            if eta > cap {
                continue; // non-oblivious protocol only reports eta <= H
            }
        }
        let mut total = 0.0;
        let mut used = 0u64;
        let mut skipped = 0u64;
        for seq in instances.windows() {
            let p_star = best_price(seq);
            let Some(p) = prediction_for(p_star, parity, eta, seq) else {
                skipped += 1;
                continue;
            };
            let prediction = BestPricePrediction::new(p)?;
            let reservation = match &algo {
                BestPriceAlgo::Ora { r } => r * prediction.value(),
                BestPriceAlgo::RobustMix { bounds } => {
                    robust_mix_reservation(prediction, seq.bounds(), bounds)
                }
            };
            total += run_reservation(seq, reservation)?.accepted_price;
            used += 1;
        }
        let avg_profit = if used > 0 { total / used as f64 } else { f64::NAN };
        rows.push(ReportRow {
            eta,
            parity: Some(parity),
            algorithm: algo.id().to_string(),
            param: algo.param(),
            avg_profit,
            skipped,
        });
    }
    Ok(SweepReport { rows })
}

/// Sweeps a query algorithm over integer error values 0..=H for each H in
/// `lie_bounds`, with `trials` randomized lie placements per (instance, eta).
pub fn sweep_query(
    instances: &InstanceSet,
    algo: QueryAlgo,
    lie_bounds: &[usize],
    query_count: usize,
    trials: usize,
    master_seed: u64,
) -> Result<SweepReport> {
    if instances.is_empty() {
        return Err(Error::InvalidInput("instance set is empty".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut rows = Vec::new();
    for &h in lie_bounds {
        let budget = QueryBudget::new(query_count, h)?;
        for eta in 0..=h {
            let mut total = 0.0;
            for (instance_idx, seq) in instances.windows().iter().enumerate() {
                let p_star = best_price(seq);
                match algo {
                    QueryAlgo::Rlis => {
                        let part = IntervalPartition::new(seq.bounds(), query_count as u64)?;
                        let truth = rlis_truthful_responses(p_star, &part);
                        for trial in 0..trials {
                            let seed =
                                derive_seed(master_seed, &[instance_idx as u64, eta as u64, trial as u64]);
                            let corrupted = corrupt_string(&truth, eta, query_count, seed);
                            let reservation =
                                rlis_reservation(&rlis_preprocess(&corrupted, h), h, &part)?;
                            total += run_reservation(seq, reservation)?.accepted_price;
                        }
                    }
                    QueryAlgo::Rbis => {
                        let cells = 1u64
                            .checked_shl(query_count as u32)
                            .ok_or_else(|| Error::InvalidParameter("query count too large".into()))?;
                        let part = IntervalPartition::new(seq.bounds(), cells)?;
                        for trial in 0..trials {
                            let seed =
                                derive_seed(master_seed, &[instance_idx as u64, eta as u64, trial as u64]);
                            let mut oracle = make_oracle(p_star, part, eta, budget, seed)?;
                            let (reservation, _) = rbis_search(&mut oracle, budget, &part)?;
                            total += run_reservation(seq, reservation)?.accepted_price;
                        }
                    }
                }
            }
            let denom = (instances.len() * trials) as f64;
            rows.push(ReportRow {
                eta: eta as f64,
                parity: None,
                algorithm: algo.id().to_string(),
                param: h as f64,
                avg_profit: total / denom,
                skipped: 0,
            });
        }
    }
    Ok(SweepReport { rows })
}

fn corrupt_string(truth: &ResponseString, lies: usize, slots: usize, seed: u64) -> ResponseString {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut corrupted = truth.clone();
    for slot in rand::seq::index::sample(&mut rng, slots, lies) {
        corrupted.flip(slot);
    }
    corrupted
}

/// The prediction-free reference rows: average profit of the classical
/// reservation sqrt(m*M) and the average best price.
pub fn baseline(instances: &InstanceSet) -> Result<SweepReport> {
    if instances.is_empty() {
        return Err(Error::InvalidInput("instance set is empty".into()));
    }
    let mut on_star_total = 0.0;
    let mut best_total = 0.0;
    for seq in instances.windows() {
        let outcome = run_reservation(seq, on_star_reservation(seq.bounds()))?;
        on_star_total += outcome.accepted_price;
        best_total += best_price(seq);
    }
    let n = instances.len() as f64;
    Ok(SweepReport {
        rows: vec![
            ReportRow {
                eta: 0.0,
                parity: None,
                algorithm: "onstar".to_string(),
                param: 0.0,
                avg_profit: on_star_total / n,
                skipped: 0,
            },
            ReportRow {
                eta: 0.0,
                parity: None,
                algorithm: "best".to_string(),
                param: 0.0,
                avg_profit: best_total / n,
                skipped: 0,
            },
        ],
    })
}

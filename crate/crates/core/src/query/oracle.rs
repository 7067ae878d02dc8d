//! Comparison-query oracles with a bounded corruption model.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::query::partition::IntervalPartition;
use crate::query::QueryBudget;

/// How answers get corrupted.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Corruption {
    /// The answers at these 0-based ask-order slots are flipped. This is the
    /// benchmark model: lies are attached to slots before the search runs.
    Slots(BTreeSet<usize>),
    /// A worst-case adaptive liar that answers misleadingly until its budget
    /// runs out. Used by invariant tests, not by the benchmark protocol.
    Misleading { budget: usize },
}

/// Answers queries of the form "is p* <= a_q" against a hidden truth,
/// flipping a bounded set of answers. A single oracle instance serves a
/// single search; `asked` advances with every query.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseOracle {
    p_star: f64,
    partition: IntervalPartition,
    corruption: Corruption,
    asked: usize,
    lies_applied: usize,
}

impl ResponseOracle {
    pub fn truthful(p_star: f64, partition: IntervalPartition) -> Self {
        Self::with_slots(p_star, partition, BTreeSet::new())
    }

    /// Corrupts exactly the given ask-order slots.
    pub fn with_slots(p_star: f64, partition: IntervalPartition, slots: BTreeSet<usize>) -> Self {
        Self {
            p_star,
            partition,
            corruption: Corruption::Slots(slots),
            asked: 0,
            lies_applied: 0,
        }
    }

    /// An adaptive adversary that negates the truth on every query until it
    /// has told `budget` lies.
    pub fn misleading(p_star: f64, partition: IntervalPartition, budget: usize) -> Self {
        Self {
            p_star,
            partition,
            corruption: Corruption::Misleading { budget },
            asked: 0,
            lies_applied: 0,
        }
    }

    /// Answers "is p* <= a_q" for grid index `grid_index`, applying the
    /// corruption model for the current slot.
    pub fn answer(&mut self, grid_index: u64) -> bool {
        let truth = self.p_star <= self.partition.point(grid_index);
        let slot = self.asked;
        self.asked += 1;
        let lie = match &self.corruption {
            Corruption::Slots(slots) => slots.contains(&slot),
            Corruption::Misleading { budget } => self.lies_applied < *budget,
        };
        if lie {
            self.lies_applied += 1;
            !truth
        } else {
            truth
        }
    }

    pub fn p_star(&self) -> f64 {
        self.p_star
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    /// Queries answered so far.
    pub fn asked(&self) -> usize {
        self.asked
    }

    /// Lies actually applied so far (the realized error).
    pub fn lies_applied(&self) -> usize {
        self.lies_applied
    }
}

/// The benchmark oracle: `lies` distinct slots among the first
/// `budget.queries()` ask-order positions, drawn deterministically from
/// `seed`, have their answers flipped.
pub fn make_oracle(
    p_star: f64,
    partition: IntervalPartition,
    lies: usize,
    budget: QueryBudget,
    seed: u64,
) -> Result<ResponseOracle> {
    if lies > budget.lie_bound() {
        return Err(Error::ContractViolation(format!(
            "{lies} lies exceed the declared bound {}",
            budget.lie_bound()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots: BTreeSet<usize> = rand::seq::index::sample(&mut rng, budget.queries(), lies)
        .into_iter()
        .collect();
    Ok(ResponseOracle::with_slots(p_star, partition, slots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::PriceBounds;

    fn part() -> IntervalPartition {
        IntervalPartition::new(PriceBounds::new(1.0, 16.0).unwrap(), 16).unwrap()
    }

    #[test]
    fn truthful_oracle_compares_against_grid() {
        let mut o = ResponseOracle::truthful(5.0, part());
        assert!(o.answer(16)); // p* <= M
        assert!(!o.answer(1));
        assert_eq!(o.asked(), 2);
        assert_eq!(o.lies_applied(), 0);
    }

    #[test]
    fn zero_lies_is_fully_truthful() {
        let budget = QueryBudget::new(8, 2).unwrap();
        let mut a = make_oracle(5.0, part(), 0, budget, 7).unwrap();
        let mut b = ResponseOracle::truthful(5.0, part());
        for q in 0..=16 {
            assert_eq!(a.answer(q), b.answer(q));
        }
    }

    #[test]
    fn too_many_lies_is_a_contract_violation() {
        let budget = QueryBudget::new(8, 2).unwrap();
        assert!(make_oracle(5.0, part(), 3, budget, 7).is_err());
    }

    #[test]
    fn same_seed_same_corruption() {
        let budget = QueryBudget::new(8, 3).unwrap();
        let mut a = make_oracle(5.0, part(), 3, budget, 42).unwrap();
        let mut b = make_oracle(5.0, part(), 3, budget, 42).unwrap();
        let answers_a: Vec<bool> = (0..8).map(|_| a.answer(8)).collect();
        let answers_b: Vec<bool> = (0..8).map(|_| b.answer(8)).collect();
        assert_eq!(answers_a, answers_b);
        assert_eq!(a.lies_applied(), 3);
    }

    #[test]
    fn misleading_oracle_spends_its_budget_first() {
        let mut o = ResponseOracle::misleading(5.0, part(), 2);
        // Truth for q=16 is yes; the first two answers are lies.
        assert!(!o.answer(16));
        assert!(!o.answer(16));
        assert!(o.answer(16));
        assert_eq!(o.lies_applied(), 2);
    }
}

//! Geometric grids over [m, M] backing the comparison queries.

use crate::error::{Error, Result};
use crate::search::PriceBounds;

/// The grid a_i = m * (M/m)^(i/k) for i in 0..=k, splitting [m, M] into k
/// multiplicatively equal cells. Points are computed on demand, so k may be
/// as large as 2^n for the binary search tree without allocating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalPartition {
    bounds: PriceBounds,
    cells: u64,
}

impl IntervalPartition {
    pub fn new(bounds: PriceBounds, cells: u64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidParameter("partition needs at least one cell".into()));
        }
        Ok(Self { bounds, cells })
    }

    pub fn bounds(&self) -> PriceBounds {
        self.bounds
    }

    pub fn cells(&self) -> u64 {
        self.cells
    }

    /// The constant ratio between adjacent grid points, (M/m)^(1/k).
    pub fn ratio_step(&self) -> f64 {
        self.bounds.spread().powf(1.0 / self.cells as f64)
    }

    /// Grid point a_i. The endpoints are returned exactly as m and M so that
    /// boundary comparisons on both the oracle and the algorithm side agree;
    /// indices above k extrapolate the same formula past M.
    pub fn point(&self, index: u64) -> f64 {
        if index == 0 {
            self.bounds.min()
        } else if index == self.cells {
            self.bounds.max()
        } else {
            self.bounds.min() * self.bounds.spread().powf(index as f64 / self.cells as f64)
        }
    }

    /// Index of the left-open cell (a_{i-1}, a_i] containing `price`, i.e.
    /// the smallest i >= 1 with price <= a_i. Uses the same computed grid
    /// points as every comparison query, so the answer is consistent with
    /// oracle responses by construction.
    pub fn leaf_containing(&self, price: f64) -> u64 {
        let (mut lo, mut hi) = (0u64, self.cells);
        // Invariant: price > point(lo) or lo = 0; price <= point(hi).
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if price <= self.point(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if price <= self.point(lo) && lo == 0 {
            1.min(self.cells)
        } else {
            hi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(m: f64, max: f64, cells: u64) -> IntervalPartition {
        IntervalPartition::new(PriceBounds::new(m, max).unwrap(), cells).unwrap()
    }

    #[test]
    fn endpoints_are_exact_and_steps_constant() {
        for (m, max, cells) in [(1.0, 64.0, 6u64), (3.0, 10.0, 7), (0.25, 97.3, 64)] {
            let p = part(m, max, cells);
            assert_eq!(p.point(0), m);
            assert_eq!(p.point(cells), max);
            let step = p.ratio_step();
            for i in 0..cells {
                let ratio = p.point(i + 1) / p.point(i);
                assert!(
                    (ratio - step).abs() <= 1e-12 * step,
                    "cell {i} ratio {ratio} vs step {step}"
                );
            }
        }
    }

    #[test]
    fn powers_of_two_grid() {
        let p = part(1.0, 64.0, 6);
        for i in 0..=6u64 {
            assert!((p.point(i) - (1u64 << i) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn leaf_containing_matches_comparisons() {
        let p = part(1.0, 64.0, 16);
        for leaf in 1..=16u64 {
            // Any interior value of (a_{l-1}, a_l] maps back to l.
            let interior = (p.point(leaf - 1) * p.point(leaf)).sqrt();
            assert_eq!(p.leaf_containing(interior), leaf);
            assert_eq!(p.leaf_containing(p.point(leaf)), leaf);
        }
        assert_eq!(p.leaf_containing(p.bounds().min()), 1);
        assert_eq!(p.leaf_containing(p.bounds().max()), 16);
    }
}

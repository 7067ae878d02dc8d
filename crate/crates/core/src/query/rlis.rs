//! Linear interval search over a precomputed, possibly corrupted response
//! string.
//!
//! The n queries ask "is p* < a_i" for the grid points a_1..a_n of an n-cell
//! partition, so a truthful string is a block of 0s followed by a block of
//! 1s. With at most `lie_bound` wrong bits, a preprocessing pass corrects
//! every bit that is contradicted by lie_bound + 1 later zeros or earlier
//! ones, and the reservation price is then read off the first surviving 1.

use crate::error::{Error, Result};
use crate::query::partition::IntervalPartition;

/// An n-bit prediction string; bit i (1-based) answers "is p* in [m, a_i)".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseString {
    bits: Vec<bool>,
}

impl ResponseString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Flips the bit at 0-based index `slot`.
    pub fn flip(&mut self, slot: usize) {
        self.bits[slot] = !self.bits[slot];
    }
}

impl std::fmt::Display for ResponseString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for ResponseString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("response strings are binary, got '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// The truthful response string for best price `p_star` on an n-cell grid:
/// bit i is 1 iff p* < a_i.
pub fn rlis_truthful_responses(p_star: f64, part: &IntervalPartition) -> ResponseString {
    let n = part.cells();
    ResponseString::new((1..=n).map(|i| p_star < part.point(i)).collect())
}

/// The error-correcting pass: counts are taken on the original string and
/// flips are applied to a copy, so corrections do not cascade.
pub fn rlis_preprocess(p: &ResponseString, lie_bound: usize) -> ResponseString {
    let bits = p.bits();
    let n = bits.len();
    let mut corrected = bits.to_vec();
    for i in 0..n {
        if bits[i] {
            let zeros_after = bits[i + 1..].iter().filter(|&&b| !b).count();
            if zeros_after >= lie_bound + 1 {
                corrected[i] = false;
            }
        } else {
            let ones_before = bits[..i].iter().filter(|&&b| b).count();
            if ones_before >= lie_bound + 1 {
                corrected[i] = true;
            }
        }
    }
    ResponseString::new(corrected)
}

/// How the reservation level was chosen from the corrected string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlisDecision {
    /// Grid index l of the reservation price a_l.
    pub level: u64,
    /// True when the corrected string contained no 1 at all. With
    /// lie_bound = 0 this yields level n + 1, a grid point extrapolated
    /// above M that degenerates to the forced last-day acceptance.
    pub all_zeros: bool,
    pub reservation: f64,
}

/// Reads the reservation price off a preprocessed string: a_{n-H+1} when all
/// bits are 0, otherwise a_l with l = max(0, i1 - (H + 1 - alpha)) where i1
/// is the 1-based index of the first 1 and alpha counts the 0s after it.
pub fn rlis_decide(
    p_prime: &ResponseString,
    lie_bound: usize,
    part: &IntervalPartition,
) -> Result<RlisDecision> {
    let n = p_prime.len();
    if part.cells() != n as u64 {
        return Err(Error::InvalidInput(format!(
            "response string length {n} does not match partition with {} cells",
            part.cells()
        )));
    }
    let bits = p_prime.bits();
    match bits.iter().position(|&b| b) {
        None => {
            let level = (n + 1 - lie_bound.min(n)) as u64;
            Ok(RlisDecision {
                level,
                all_zeros: true,
                reservation: part.point(level),
            })
        }
        Some(first_one) => {
            let i1 = first_one + 1; // 1-based
            let alpha = bits[first_one + 1..].iter().filter(|&&b| !b).count();
            let level = (i1 as i64 + alpha as i64 - lie_bound as i64 - 1).max(0);
            if level >= n as i64 {
                return Err(Error::InternalInvariant(format!(
                    "reservation level {level} escaped the grid 0..{n}"
                )));
            }
            Ok(RlisDecision {
                level: level as u64,
                all_zeros: false,
                reservation: part.point(level as u64),
            })
        }
    }
}

/// The reservation price alone; see [`rlis_decide`] for the full decision.
pub fn rlis_reservation(
    p_prime: &ResponseString,
    lie_bound: usize,
    part: &IntervalPartition,
) -> Result<f64> {
    rlis_decide(p_prime, lie_bound, part).map(|d| d.reservation)
}

/// The proven competitive ratio (M/m)^(2H/n). At H = 0 this degenerates to
/// 1 while the realized zero-error ratio is (M/m)^(1/n).
pub fn rlis_bound(query_count: usize, lie_bound: usize, bounds: crate::search::PriceBounds) -> f64 {
    bounds.spread().powf(2.0 * lie_bound as f64 / query_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::PriceBounds;
    use std::str::FromStr;

    fn part(m: f64, max: f64, cells: u64) -> IntervalPartition {
        IntervalPartition::new(PriceBounds::new(m, max).unwrap(), cells).unwrap()
    }

    fn rs(s: &str) -> ResponseString {
        ResponseString::from_str(s).unwrap()
    }

    #[test]
    fn truthful_responses_examples() {
        let p = part(1.0, 64.0, 6);
        assert_eq!(rlis_truthful_responses(5.0, &p).to_string(), "001111");
        assert_eq!(rlis_truthful_responses(1.0, &p).to_string(), "111111");
        assert_eq!(rlis_truthful_responses(64.0, &p).to_string(), "000000");
    }

    #[test]
    fn preprocess_examples() {
        assert_eq!(rlis_preprocess(&rs("010011"), 1).to_string(), "000011");
        assert_eq!(rlis_preprocess(&rs("000111"), 1).to_string(), "000111");
        assert_eq!(rlis_preprocess(&rs("000000"), 2).to_string(), "000000");
    }

    #[test]
    fn reservation_examples() {
        let p = part(1.0, 64.0, 6);

        // i1 = 4, alpha = 0, l = 2.
        let d = rlis_decide(&rs("000111"), 1, &p).unwrap();
        assert_eq!(d.level, 2);
        assert!(!d.all_zeros);
        assert!((d.reservation - 4.0).abs() < 1e-12);

        // All-zero branch: l = n - H + 1 = 5.
        let d = rlis_decide(&rs("000000"), 2, &p).unwrap();
        assert_eq!(d.level, 5);
        assert!(d.all_zeros);
        assert!((d.reservation - 32.0).abs() < 1e-12);
    }

    #[test]
    fn zero_lies_reserve_the_cell_floor() {
        // With H = 0 a truthful 0^j 1^(n-j) string reserves a_j.
        let p = part(1.0, 64.0, 6);
        for j in 0..6u64 {
            let p_star = (p.point(j) * p.point(j + 1)).sqrt();
            let truth = rlis_truthful_responses(p_star, &p);
            let d = rlis_decide(&rlis_preprocess(&truth, 0), 0, &p).unwrap();
            assert_eq!(d.level, j);
        }
    }

    #[test]
    fn all_zero_with_no_lie_budget_extrapolates_past_max() {
        let p = part(1.0, 64.0, 6);
        let d = rlis_decide(&rs("000000"), 0, &p).unwrap();
        assert_eq!(d.level, 7);
        assert!(d.all_zeros);
        assert!(d.reservation > 64.0);
    }

    #[test]
    fn bound_examples() {
        let b = PriceBounds::new(1.0, 10.0).unwrap();
        assert!((rlis_bound(25, 5, b) - 10f64.powf(0.4)).abs() < 1e-12);
        assert_eq!(rlis_bound(25, 0, b), 1.0);
        assert_eq!(rlis_bound(10, 5, b), 10.0);
    }

    #[test]
    fn string_parse_round_trip() {
        let s = rs("0101");
        assert_eq!(s.to_string(), "0101");
        assert!(ResponseString::from_str("01x1").is_err());
    }
}

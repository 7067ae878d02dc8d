//! Best-price predictions and the two reservation algorithms built on them.
//!
//! A prediction p of the best price p* carries a signed relative error eta:
//! negative parity means p* <= p with 1 - eta = p*/p, positive parity means
//! p* > p with 1 + eta = p*/p. The oblivious algorithm (reservation r*p)
//! knows nothing about eta; the non-oblivious one knows caps on each parity
//! and can hedge back to the classical sqrt(m*M) reservation when those caps
//! make the prediction worthless.

use crate::error::{Error, Result};
use crate::search::{on_star_reservation, PriceBounds};

/// Whether the true best price sits below (negative) or above (positive) the
/// prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Negative,
    Positive,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Negative => write!(f, "neg"),
            Parity::Positive => write!(f, "pos"),
        }
    }
}

/// A signed prediction error: parity plus magnitude.
///
/// The boundary p* = p is classified as negative with eta = 0, so positive
/// errors are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSpec {
    parity: Parity,
    eta: f64,
}

impl ErrorSpec {
    pub fn negative(eta: f64) -> Result<Self> {
        if !eta.is_finite() || !(0.0..1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "negative error must lie in [0, 1), got {eta}"
            )));
        }
        Ok(Self { parity: Parity::Negative, eta })
    }

    pub fn positive(eta: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "positive error must be strictly positive, got {eta}"
            )));
        }
        Ok(Self { parity: Parity::Positive, eta })
    }

    pub fn new(parity: Parity, eta: f64) -> Result<Self> {
        match parity {
            Parity::Negative => Self::negative(eta),
            Parity::Positive => Self::positive(eta),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Largest negative error representable within `bounds`: (M-m)/M.
    pub fn max_negative(bounds: PriceBounds) -> f64 {
        (bounds.max() - bounds.min()) / bounds.max()
    }

    /// Largest positive error representable within `bounds`: (M-m)/m.
    pub fn max_positive(bounds: PriceBounds) -> f64 {
        (bounds.max() - bounds.min()) / bounds.min()
    }

    pub fn feasible_for(&self, bounds: PriceBounds) -> bool {
        match self.parity {
            Parity::Negative => self.eta <= Self::max_negative(bounds),
            Parity::Positive => self.eta <= Self::max_positive(bounds),
        }
    }
}

/// Known caps on the negative and positive prediction errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBounds {
    h_neg: f64,
    h_pos: f64,
}

impl ErrorBounds {
    pub fn new(h_neg: f64, h_pos: f64) -> Result<Self> {
        if !h_neg.is_finite() || !(0.0..1.0).contains(&h_neg) {
            return Err(Error::InvalidParameter(format!(
                "negative error cap must lie in [0, 1), got {h_neg}"
            )));
        }
        if !h_pos.is_finite() || h_pos < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "positive error cap must be non-negative, got {h_pos}"
            )));
        }
        Ok(Self { h_neg, h_pos })
    }

    /// Both caps set to the same value, as in the benchmark protocol.
    pub fn symmetric(h: f64) -> Result<Self> {
        Self::new(h, h)
    }

    pub fn h_neg(&self) -> f64 {
        self.h_neg
    }

    pub fn h_pos(&self) -> f64 {
        self.h_pos
    }

    pub fn feasible_for(&self, bounds: PriceBounds) -> bool {
        self.h_neg <= ErrorSpec::max_negative(bounds) && self.h_pos <= ErrorSpec::max_positive(bounds)
    }

    pub fn covers(&self, err: &ErrorSpec) -> bool {
        match err.parity() {
            Parity::Negative => err.eta() <= self.h_neg,
            Parity::Positive => err.eta() <= self.h_pos,
        }
    }
}

/// A predicted best price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestPricePrediction {
    value: f64,
}

impl BestPricePrediction {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "prediction must be positive and finite, got {value}"
            )));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// The prediction that carries exactly error `err` against the true best
/// price: p = p*/(1-eta) for negative parity, p = p*/(1+eta) for positive.
///
/// Fails when the implied prediction falls outside `[m, M]`, i.e. the error
/// magnitude is infeasible for this p*.
pub fn prediction_from_truth(
    p_star: f64,
    err: &ErrorSpec,
    bounds: PriceBounds,
) -> Result<BestPricePrediction> {
    let p = match err.parity() {
        Parity::Negative => p_star / (1.0 - err.eta()),
        Parity::Positive => p_star / (1.0 + err.eta()),
    };
    if !bounds.contains(p) {
        return Err(Error::OutOfRange(format!(
            "prediction {p} for best price {p_star} falls outside [{}, {}]",
            bounds.min(),
            bounds.max()
        )));
    }
    BestPricePrediction::new(p)
}

/// The signed error of prediction `p` against truth `p_star`. Ties go to the
/// negative parity with eta = 0.
pub fn error_from_pair(p_star: f64, p: f64) -> ErrorSpec {
    if p_star <= p {
        ErrorSpec {
            parity: Parity::Negative,
            eta: 1.0 - p_star / p,
        }
    } else {
        ErrorSpec {
            parity: Parity::Positive,
            eta: p_star / p - 1.0,
        }
    }
}

/// Reservation price of the oblivious algorithm: r * p, unclamped.
pub fn ora_reservation(p: BestPricePrediction, r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "reservation factor must be positive, got {r}"
        )));
    }
    Ok(r * p.value())
}

/// The proven competitive ratio of the oblivious reservation algorithm with
/// factor r under error `err`. The same piecewise expression is also the
/// adversarial lower bound for any deterministic policy whose day-1
/// acceptance threshold is r times its prediction.
///
/// The branch predicates are written as `r <= 1 -/+ eta` so that instance
/// generation in the adversary module selects the same branch bit-for-bit.
pub fn ora_bound(err: &ErrorSpec, r: f64, bounds: PriceBounds) -> f64 {
    match err.parity() {
        Parity::Negative => {
            if r <= 1.0 - err.eta() {
                (1.0 - err.eta()) / r
            } else {
                (1.0 - err.eta()) * bounds.spread()
            }
        }
        Parity::Positive => {
            if r <= 1.0 + err.eta() {
                (1.0 + err.eta()) / r
            } else {
                bounds.spread()
            }
        }
    }
}

/// Reservation price of the non-oblivious algorithm: p * (1 - H_n) when the
/// caps leave the prediction useful, the classical sqrt(m*M) otherwise.
/// Equality at the threshold keeps the prediction branch.
pub fn robust_mix_reservation(p: BestPricePrediction, bounds: PriceBounds, hb: &ErrorBounds) -> f64 {
    if (1.0 + hb.h_pos()) / (1.0 - hb.h_neg()) > bounds.sqrt_spread() {
        on_star_reservation(bounds)
    } else {
        p.value() * (1.0 - hb.h_neg())
    }
}

/// The proven competitive ratio of the non-oblivious algorithm, conditional
/// on the promise eta <= H for the matching parity.
pub fn robust_mix_bound(err: &ErrorSpec, bounds: PriceBounds, hb: &ErrorBounds) -> Result<f64> {
    if !hb.covers(err) {
        return Err(Error::ContractViolation(format!(
            "error {} {} exceeds its declared cap",
            err.parity(),
            err.eta()
        )));
    }
    let numerator = match err.parity() {
        Parity::Negative => 1.0 - err.eta(),
        Parity::Positive => 1.0 + err.eta(),
    };
    Ok((numerator / (1.0 - hb.h_neg())).min(bounds.sqrt_spread()))
}

/// An error value for which the adversarial lower bound of a day-1 threshold
/// ratio `r_policy` strictly exceeds sqrt(M/m), witnessing that no oblivious
/// policy is robust.
///
/// For sqrt(m/M) < r_policy < 1 the witness is the midpoint of the open
/// negative interval (1 - r_policy, 1 - sqrt(m/M)); otherwise a positive
/// error just above r_policy * sqrt(M/m) - 1, clamped to feasibility. The
/// positive witness carries a 1e-6 relative margin so the exceedance is
/// strict rather than an equality.
pub fn corollary1_witness(r_policy: f64, bounds: PriceBounds) -> Result<ErrorSpec> {
    if !r_policy.is_finite() || r_policy <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold ratio must be positive, got {r_policy}"
        )));
    }
    if bounds.max() <= bounds.min() {
        return Err(Error::NoWitness(
            "degenerate bounds M = m admit ratio 1 for every policy".into(),
        ));
    }
    let s = bounds.sqrt_spread();

    let witness = if r_policy < 1.0 && r_policy > 1.0 / s {
        // Negative interval (1 - r, 1 - sqrt(m/M)) is nonempty; take its midpoint.
        let lo = 1.0 - r_policy;
        let hi = 1.0 - 1.0 / s;
        ErrorSpec::negative((lo + hi) / 2.0)?
    } else {
        let cap = ErrorSpec::max_positive(bounds);
        let candidate = r_policy * s * (1.0 + 1e-6) - 1.0;
        let eta = if candidate <= 0.0 { cap / 2.0 } else { candidate.min(cap) };
        if eta <= 0.0 {
            return Err(Error::NoWitness(format!(
                "no feasible positive error for threshold ratio {r_policy}"
            )));
        }
        ErrorSpec::positive(eta)?
    };

    if ora_bound(&witness, r_policy, bounds) <= s {
        return Err(Error::NoWitness(format!(
            "no error in range makes the lower bound exceed sqrt(M/m) for ratio {r_policy}"
        )));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bounds(m: f64, max: f64) -> PriceBounds {
        PriceBounds::new(m, max).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn prediction_from_truth_examples() {
        let b = bounds(1.0, 1000.0);
        let p = prediction_from_truth(100.0, &ErrorSpec::negative(0.2).unwrap(), b).unwrap();
        assert!(close(p.value(), 125.0, 1e-12));

        let p = prediction_from_truth(100.0, &ErrorSpec::positive(0.25).unwrap(), b).unwrap();
        assert!(close(p.value(), 80.0, 1e-12));

        let p = prediction_from_truth(100.0, &ErrorSpec::negative(0.0).unwrap(), b).unwrap();
        assert_eq!(p.value(), 100.0);
    }

    #[test]
    fn prediction_out_of_range_is_rejected() {
        let b = bounds(1.0, 110.0);
        // p = 100 / 0.8 = 125 > M.
        assert!(prediction_from_truth(100.0, &ErrorSpec::negative(0.2).unwrap(), b).is_err());
    }

    #[test]
    fn error_from_pair_examples() {
        let e = error_from_pair(80.0, 100.0);
        assert_eq!(e.parity(), Parity::Negative);
        assert!(close(e.eta(), 0.2, 1e-14));

        let e = error_from_pair(100.0, 80.0);
        assert_eq!(e.parity(), Parity::Positive);
        assert!(close(e.eta(), 0.25, 1e-14));

        let e = error_from_pair(42.0, 42.0);
        assert_eq!(e.parity(), Parity::Negative);
        assert_eq!(e.eta(), 0.0);
    }

    #[test]
    fn ora_reservation_examples() {
        let p = BestPricePrediction::new(100.0).unwrap();
        assert_eq!(ora_reservation(p, 0.75).unwrap(), 75.0);
        assert_eq!(ora_reservation(p, 1.0).unwrap(), 100.0);
        assert_eq!(ora_reservation(p, 1.5).unwrap(), 150.0);
        assert!(ora_reservation(p, 0.0).is_err());
        assert!(ora_reservation(p, -1.0).is_err());
    }

    #[test]
    fn ora_bound_examples() {
        let b = bounds(1.0, 10.0);
        // Positive error below r-1 rejects even M: ratio is the full spread.
        let e = ErrorSpec::positive(0.3).unwrap();
        assert_eq!(ora_bound(&e, 1.5, b), 10.0);

        let e = ErrorSpec::negative(0.0).unwrap();
        assert_eq!(ora_bound(&e, 1.0, b), 1.0);

        // Boundary eta = 1 - r belongs to the first branch.
        let e = ErrorSpec::negative(0.25).unwrap();
        assert_eq!(ora_bound(&e, 0.75, b), 1.0);
    }

    #[test]
    fn robust_mix_reservation_examples() {
        let hb = ErrorBounds::new(0.1, 0.2).unwrap();
        let p = BestPricePrediction::new(100.0).unwrap();
        // (1.2/0.9) = 1.33 <= 3 keeps the prediction branch.
        assert_eq!(robust_mix_reservation(p, bounds(10.0, 90.0), &hb), 90.0);

        let hb = ErrorBounds::new(0.0, 0.0).unwrap();
        assert_eq!(robust_mix_reservation(p, bounds(1.0, 100.0), &hb), 100.0);

        // (1.5/0.4) = 3.75 > 2 falls back to sqrt(m*M).
        let hb = ErrorBounds::new(0.6, 0.5).unwrap();
        let b = bounds(25.0, 100.0);
        assert_eq!(robust_mix_reservation(p, b, &hb), 50.0);
    }

    #[test]
    fn robust_mix_bound_examples() {
        let b = bounds(1.0, 10.0);
        let hb = ErrorBounds::new(0.1, 0.1).unwrap();
        let e = ErrorSpec::negative(0.0).unwrap();
        let got = robust_mix_bound(&e, b, &hb).unwrap();
        assert!(close(got, 1.0 / 0.9, 1e-12));

        // Huge spread: the positive branch returns (1 + eta) exactly.
        let b_wide = bounds(1.0, 1e12);
        let hb = ErrorBounds::new(0.0, 0.4).unwrap();
        let e = ErrorSpec::positive(0.4).unwrap();
        assert_eq!(robust_mix_bound(&e, b_wide, &hb).unwrap(), 1.4);

        let hb = ErrorBounds::new(0.0, 0.0).unwrap();
        let e = ErrorSpec::negative(0.0).unwrap();
        assert_eq!(robust_mix_bound(&e, b, &hb).unwrap(), 1.0);

        // Promise broken: eta above its cap is a contract violation.
        let hb = ErrorBounds::new(0.1, 0.1).unwrap();
        let e = ErrorSpec::positive(0.2).unwrap();
        assert!(robust_mix_bound(&e, b, &hb).is_err());
    }

    #[test]
    fn corollary1_witness_examples() {
        let b = bounds(1.0, 10.0);

        // r = 1: positive witness just above sqrt(10) - 1.
        let w = corollary1_witness(1.0, b).unwrap();
        assert_eq!(w.parity(), Parity::Positive);
        assert!(close(w.eta(), 10f64.sqrt() - 1.0, 1e-5));
        assert!(ora_bound(&w, 1.0, b) > b.sqrt_spread());

        // r = 0.5 with M/m = 100: negative midpoint of (0.5, 0.9).
        let b100 = bounds(1.0, 100.0);
        let w = corollary1_witness(0.5, b100).unwrap();
        assert_eq!(w.parity(), Parity::Negative);
        assert!(close(w.eta(), 0.7, 1e-12));
        assert!(ora_bound(&w, 0.5, b100) > b100.sqrt_spread());

        // Degenerate bounds admit no witness.
        assert!(corollary1_witness(1.0, bounds(5.0, 5.0)).is_err());
    }

    #[test]
    fn corollary1_witness_is_strict_over_a_ratio_grid() {
        let b = bounds(1.0, 10.0);
        for i in 1..=40 {
            let r = i as f64 * 0.05; // 0.05 .. 2.0
            let w = corollary1_witness(r, b).unwrap();
            assert!(
                ora_bound(&w, r, b) > b.sqrt_spread(),
                "witness for r={r} is not strict"
            );
        }
    }

    proptest! {
        /// prediction_from_truth and error_from_pair invert each other;
        /// "exactly" up to the 2-ulp division round-off of f64.
        #[test]
        fn error_round_trip(
            p_star in 1.0f64..1000.0,
            eta in 0.0f64..0.9,
            positive in proptest::bool::ANY,
        ) {
            let b = bounds(1e-6, 1e9);
            let err = if positive && eta > 0.0 {
                ErrorSpec::positive(eta).unwrap()
            } else {
                ErrorSpec::negative(eta).unwrap()
            };
            let p = prediction_from_truth(p_star, &err, b).unwrap();
            let back = error_from_pair(p_star, p.value());
            let tol = 4.0 * f64::EPSILON * (1.0 + eta);
            if eta > tol {
                prop_assert_eq!(back.parity(), err.parity());
            }
            prop_assert!((back.eta() - err.eta()).abs() <= tol);
        }
    }
}

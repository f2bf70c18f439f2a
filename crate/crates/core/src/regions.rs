//! Geometry of the (α, β) index plane and the associated lower bounds.

use std::f64::consts::{E, PI};
use std::fmt;

use thiserror::Error;

/// Default tolerance on 1/α + 1/β − 2 for membership in the conjugacy curve.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Half-width of the neighborhood of α = 1 where B takes its limit value.
const UNIT_BAND: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("{name} = {value} violates {condition}")]
    Domain { name: &'static str, condition: &'static str, value: f64 },
}

/// A pair of finite, nonnegative Rényi indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexPair {
    pub alpha: f64,
    pub beta: f64,
}

impl IndexPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, RegionError> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(RegionError::Domain { name, condition: "finite and >= 0", value: v });
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn swapped(self) -> Self {
        Self { alpha: self.beta, beta: self.alpha }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Partition of the nonnegative quadrant.
///
/// `C`, `S` and `DMinus` together make up D, the set where a state-independent
/// bound exists; `D0` is its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Conjugacy curve 1/α + 1/β = 2.
    C,
    /// D without S and C.
    DMinus,
    /// Open square [0, 1/2)².
    S,
    /// α > 1/2 and β > α̃: no bound.
    D0,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Region::C => "C",
            Region::DMinus => "D_minus",
            Region::S => "S",
            Region::D0 => "D0",
        }
    }

    pub fn in_d(self) -> bool {
        self != Region::D0
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The three Fourier settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    ContinuousContinuous,
    DiscreteDiscrete { n: usize },
    DiscreteContinuous,
}

impl BoundCase {
    pub fn tag(self) -> &'static str {
        match self {
            BoundCase::ContinuousContinuous => "cc",
            BoundCase::DiscreteDiscrete { .. } => "dd",
            BoundCase::DiscreteContinuous => "dc",
        }
    }
}

/// A lower bound on N_α N_β, or the statement that none exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralBound {
    Finite(f64),
    NoBound,
}

impl GeneralBound {
    pub fn value(self) -> Option<f64> {
        match self {
            GeneralBound::Finite(v) => Some(v),
            GeneralBound::NoBound => None,
        }
    }
}

/// α̃ = α / (2α − 1); +∞ at α = 1/2.
pub fn conjugate_index(alpha: f64) -> Result<f64, RegionError> {
    if !(alpha >= 0.5) {
        return Err(RegionError::Domain { name: "alpha", condition: "alpha >= 1/2", value: alpha });
    }
    if alpha == 0.5 {
        return Ok(f64::INFINITY);
    }
    if alpha.is_infinite() {
        return Ok(0.5);
    }
    Ok(alpha / (2.0 * alpha - 1.0))
}

pub fn classify(pair: IndexPair) -> Region {
    classify_with_tol(pair, CLASSIFY_TOL)
}

pub fn classify_with_tol(pair: IndexPair, tol: f64) -> Region {
    let IndexPair { alpha, beta } = pair;
    let excess = 2.0 - 1.0 / alpha - 1.0 / beta;
    if alpha >= 0.5 && beta >= 0.5 && excess.abs() <= tol {
        Region::C
    } else if alpha > 0.5 && beta > 0.5 && excess > tol {
        Region::D0
    } else if alpha < 0.5 && beta < 0.5 {
        Region::S
    } else {
        Region::DMinus
    }
}

/// B(α) = π α^{1/(2(α−1))} α̃^{1/(2(α̃−1))} for α ≥ 1/2, with B(1/2) = 2π
/// and B(1) = eπ.
pub fn bound_b(alpha: f64) -> Result<f64, RegionError> {
    if !(alpha >= 0.5) {
        return Err(RegionError::Domain { name: "alpha", condition: "alpha >= 1/2", value: alpha });
    }
    if alpha == 0.5 || alpha.is_infinite() {
        return Ok(2.0 * PI);
    }
    let h = alpha - 1.0;
    if h.abs() < UNIT_BAND {
        return Ok(E * PI);
    }
    // ln B = ln π − ln α + (2α−1) ln(2α−1) / (2(α−1))
    let x = 2.0 * h;
    let ln_b = PI.ln() - alpha.ln() + (1.0 + x) * x.ln_1p() / x;
    Ok(ln_b.exp())
}

/// Bound on N_α N_β for conjugate continuous states, or `NoBound` in D0.
pub fn bound_general(pair: IndexPair) -> GeneralBound {
    match classify(pair) {
        Region::D0 => GeneralBound::NoBound,
        Region::S => GeneralBound::Finite(2.0 * PI),
        Region::C | Region::DMinus => {
            let m = pair.alpha.max(pair.beta);
            // max(α, β) ≥ 1/2 outside S
            GeneralBound::Finite(bound_b(m).expect("max index is at least 1/2 outside S"))
        }
    }
}

/// Sharp constant for conjugated indices 1/p + 1/q = 1.
pub fn bound_conjugated(case: BoundCase, p: f64) -> Result<f64, RegionError> {
    if !(p >= 1.0) {
        return Err(RegionError::Domain { name: "p", condition: "p >= 1", value: p });
    }
    match case {
        BoundCase::DiscreteDiscrete { n } => {
            if n == 0 {
                return Err(RegionError::Domain { name: "n", condition: "n >= 1", value: 0.0 });
            }
            Ok(n as f64)
        }
        BoundCase::DiscreteContinuous => Ok(2.0 * PI),
        // C_{p,q} = 2π p^{1/(p−2)} q^{1/(q−2)} = B(p/2)
        BoundCase::ContinuousContinuous => bound_b(0.5 * p),
    }
}

/// (2n/(n+1))².
pub fn maassen_bound(n: usize) -> Result<f64, RegionError> {
    if n == 0 {
        return Err(RegionError::Domain { name: "n", condition: "n >= 1", value: 0.0 });
    }
    let r = 2.0 * n as f64 / (n as f64 + 1.0);
    Ok(r * r)
}

/// (2√n/(√n+1))² = ((1 + 1/√n)/2)^{-2}: the lower bound on N_∞ N_∞ for
/// the DFT pair, whose bases overlap by 1/√n. Monotonicity in λ extends it
/// to every pair, and it is attained at (∞, ∞). It lies below
/// [`maassen_bound`] for n ≥ 2, which explicit states violate.
pub fn overlap_bound(n: usize) -> Result<f64, RegionError> {
    if n == 0 {
        return Err(RegionError::Domain { name: "n", condition: "n >= 1", value: 0.0 });
    }
    let r = (n as f64).sqrt();
    Ok(4.0 * n as f64 / ((r + 1.0) * (r + 1.0)))
}

/// sup_n (2n/(n+1))² = 4.
pub const MAASSEN_SUPREMUM: f64 = 4.0;

/// π α^{1/(2(α−1))} β^{1/(2(β−1))}: the Gaussian uncertainty product.
pub fn gaussian_product_analytic(pair: IndexPair) -> f64 {
    PI * gaussian_index_factor(pair.alpha) * gaussian_index_factor(pair.beta)
}

/// λ^{1/(2(λ−1))}, continuous at λ = 1 (√e), +∞ at λ = 0 and 1 at λ = ∞.
pub fn gaussian_index_factor(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return f64::INFINITY;
    }
    if lambda.is_infinite() {
        return 1.0;
    }
    let h = lambda - 1.0;
    if h == 0.0 {
        return 0.5f64.exp();
    }
    (0.5 * h.ln_1p() / h).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pair(a: f64, b: f64) -> IndexPair {
        IndexPair::new(a, b).unwrap()
    }

    /// Direct evaluation of the defining product, away from its removable
    /// singularities.
    fn b_direct(alpha: f64) -> f64 {
        let at = alpha / (2.0 * alpha - 1.0);
        PI * alpha.powf(1.0 / (2.0 * (alpha - 1.0))) * at.powf(1.0 / (2.0 * (at - 1.0)))
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_index(1.0).unwrap(), 1.0);
        assert!((conjugate_index(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(conjugate_index(0.5).unwrap(), f64::INFINITY);
        assert!(conjugate_index(0.49).is_err());
    }

    #[test]
    fn conjugation_is_involution() {
        for i in 1..500 {
            let a = 0.5 + 0.0371 * i as f64;
            let back = conjugate_index(conjugate_index(a).unwrap()).unwrap();
            assert!((back - a).abs() <= 1e-12 * a, "{a}");
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(pair(2.0, 2.0)), Region::D0);
        assert_eq!(classify(pair(2.0, 2.0 / 3.0)), Region::C);
        assert_eq!(classify(pair(2.0, 0.5)), Region::DMinus);
        assert_eq!(classify(pair(0.3, 0.4)), Region::S);
        assert_eq!(classify(pair(1.0, 1.0)), Region::C);
        assert_eq!(classify(pair(0.5, 0.3)), Region::DMinus);
        assert_eq!(classify(pair(0.0, 0.0)), Region::S);
        assert_eq!(classify(pair(0.0, 7.0)), Region::DMinus);
    }

    #[test]
    fn classification_partition_on_random_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = pair(rng.random_range(0.0..5.0), rng.random_range(0.0..5.0));
            let r = classify(p);
            let excess = 2.0 - 1.0 / p.alpha - 1.0 / p.beta;
            let in_c = p.alpha >= 0.5 && excess.abs() <= CLASSIFY_TOL;
            let in_d0 = p.alpha > 0.5 && excess > CLASSIFY_TOL;
            let in_s = p.alpha < 0.5 && p.beta < 0.5;
            let hits = [in_c, in_d0, in_s].iter().filter(|b| **b).count();
            assert!(hits <= 1);
            match r {
                Region::C => assert!(in_c),
                Region::D0 => assert!(in_d0),
                Region::S => assert!(in_s),
                Region::DMinus => assert_eq!(hits, 0),
            }
            assert_eq!(r, classify(p.swapped()));
        }
        // points constructed on the curve
        for i in 1..200 {
            let a = 0.5 + 0.05 * i as f64;
            let p = pair(a, conjugate_index(a).unwrap());
            if (1.0 / p.alpha + 1.0 / p.beta - 2.0).abs() <= CLASSIFY_TOL {
                assert_eq!(classify(p), Region::C);
            }
        }
    }

    #[test]
    fn b_examples() {
        assert!((bound_b(0.5).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((bound_b(1.0).unwrap() - E * PI).abs() < 1e-15);
        let b2 = 3.0 * 3f64.sqrt() * PI / 2.0;
        assert!((bound_b(2.0).unwrap() - b2).abs() < 1e-13);
        assert!((bound_b(2.0).unwrap() - 8.162_097_139_1).abs() < 1e-9);
        assert!(bound_b(0.4).is_err());
        for a in [0.6, 0.8, 1.5, 3.0, 7.0] {
            assert!((bound_b(a).unwrap() - b_direct(a)).abs() < 1e-12 * b_direct(a));
        }
    }

    #[test]
    fn b_is_symmetric_and_unimodal() {
        for i in 1..300 {
            let a = 0.5 + 0.02 * i as f64;
            let at = conjugate_index(a).unwrap();
            let diff = (bound_b(a).unwrap() - bound_b(at).unwrap()).abs();
            assert!(diff <= 1e-12 * bound_b(a).unwrap(), "{a}");
        }
        let grid: Vec<f64> = (0..200).map(|i| 0.5 + 0.5 * i as f64 / 199.0).collect();
        for w in grid.windows(2) {
            assert!(bound_b(w[1]).unwrap() >= bound_b(w[0]).unwrap() - 1e-12);
        }
        let grid: Vec<f64> = (0..200).map(|i| 1.0 + 20.0 * i as f64 / 199.0).collect();
        for w in grid.windows(2) {
            assert!(bound_b(w[1]).unwrap() <= bound_b(w[0]).unwrap() + 1e-12);
        }
        for g in [0.5, 0.7, 1.0 - 2e-6, 1.0, 1.0 + 1e-7, 4.0, 1e6] {
            let b = bound_b(g).unwrap();
            assert!((2.0 * PI - 1e-12..=E * PI + 1e-12).contains(&b));
        }
    }

    #[test]
    fn b_is_continuous_at_one() {
        let inside = bound_b(1.0 + 0.9e-6).unwrap();
        let outside = bound_b(1.0 + 1.1e-6).unwrap();
        assert!((inside - outside).abs() < 1e-10);
    }

    #[test]
    fn general_bound_examples() {
        let b2 = 3.0 * 3f64.sqrt() * PI / 2.0;
        assert!((bound_general(pair(2.0, 0.5)).value().unwrap() - b2).abs() < 1e-13);
        assert_eq!(bound_general(pair(0.3, 0.4)), GeneralBound::Finite(2.0 * PI));
        assert_eq!(bound_general(pair(2.0, 2.0)), GeneralBound::NoBound);
        assert!((bound_general(pair(0.5, 0.2)).value().unwrap() - 2.0 * PI).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let p = pair(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0));
            assert_eq!(bound_general(p), bound_general(p.swapped()));
        }
    }

    #[test]
    fn conjugated_examples() {
        assert!((bound_conjugated(BoundCase::ContinuousContinuous, 2.0).unwrap() - E * PI).abs() < 1e-15);
        assert_eq!(bound_conjugated(BoundCase::DiscreteDiscrete { n: 5 }, 3.3).unwrap(), 5.0);
        assert_eq!(bound_conjugated(BoundCase::DiscreteContinuous, 1.7).unwrap(), 2.0 * PI);
        assert!((bound_conjugated(BoundCase::ContinuousContinuous, 1.0).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(
            (bound_conjugated(BoundCase::ContinuousContinuous, 4.0).unwrap() - bound_b(2.0).unwrap()).abs()
                < 1e-15
        );
        for p in [1.2f64, 1.5, 3.0, 6.0] {
            let q = p / (p - 1.0);
            let direct = 2.0 * PI * p.powf(1.0 / (p - 2.0)) * q.powf(1.0 / (q - 2.0));
            let got = bound_conjugated(BoundCase::ContinuousContinuous, p).unwrap();
            assert!((got - direct).abs() < 1e-12 * direct, "p={p}");
        }
        assert!(bound_conjugated(BoundCase::ContinuousContinuous, 0.9).is_err());
    }

    #[test]
    fn maassen_examples() {
        assert_eq!(maassen_bound(1).unwrap(), 1.0);
        assert!((maassen_bound(2).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        assert!((maassen_bound(4).unwrap() - 2.56).abs() < 1e-15);
        assert!(maassen_bound(0).is_err());
        let big = maassen_bound(1_000_000).unwrap();
        assert!(big < MAASSEN_SUPREMUM && MAASSEN_SUPREMUM - big < 1e-5);
    }

    #[test]
    fn gaussian_product_examples() {
        assert!((gaussian_product_analytic(pair(2.0, 2.0)) - 2.0 * PI).abs() < 1e-14);
        let on_c = gaussian_product_analytic(pair(2.0, 2.0 / 3.0));
        assert!((on_c - bound_b(2.0).unwrap()).abs() < 1e-13);
        let off = gaussian_product_analytic(pair(2.0, 0.5));
        assert!((off - 2.0 * 2f64.sqrt() * PI).abs() < 1e-13);
        assert!(off > bound_b(2.0).unwrap());
        assert!((gaussian_product_analytic(pair(1.0, 1.0)) - E * PI).abs() < 1e-14);
        let near = gaussian_product_analytic(pair(1.0 + 1e-9, 1.0));
        assert!((near - E * PI).abs() < 1e-8);
    }
}

//! The four exponent terms of the total query cost and their grid minimisation.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::solver::Params;

/// Exponents of `n` in the four cost contributions (log factors dropped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostTerms {
    /// Sampling and neighbourhood checks, `1 + ε`.
    pub e1: f64,
    /// High-degree processing, `1 + δ + ε′`.
    pub e2: f64,
    /// Search inside `T`, `(3 − ε′)/2`.
    pub e3: f64,
    /// Search through `E`, `(3 − min(δ, ε − δ − ε′))/2`.
    pub e4: f64,
    pub dominant: f64,
    /// `min(δ, ε − δ − ε′) ≤ 0`: the `E` bound is no better than brute force.
    pub degenerate: bool,
}

pub fn cost_terms(params: &Params) -> CostTerms {
    let (eps, epsp, delta) = (params.epsilon, params.epsilon_prime, params.delta);
    let gap = delta.min(eps - delta - epsp);
    let e1 = 1.0 + eps;
    let e2 = 1.0 + delta + epsp;
    let e3 = (3.0 - epsp) / 2.0;
    let e4 = (3.0 - gap) / 2.0;
    CostTerms {
        e1,
        e2,
        e3,
        e4,
        dominant: e1.max(e2).max(e3).max(e4),
        degenerate: gap <= 0.0,
    }
}

/// Exact dominant exponent for rational parameters.
pub fn dominant_exact(eps: Ratio<i64>, epsp: Ratio<i64>, delta: Ratio<i64>) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    let two = Ratio::from_integer(2);
    let three = Ratio::from_integer(3);
    let gap = delta.min(eps - delta - epsp);
    [
        one + eps,
        one + delta + epsp,
        (three - epsp) / two,
        (three - gap) / two,
    ]
    .into_iter()
    .max()
    .expect("four terms")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridOptimum {
    pub resolution: u32,
    pub epsilon: Ratio<i64>,
    pub epsilon_prime: Ratio<i64>,
    pub delta: Ratio<i64>,
    pub dominant: Ratio<i64>,
    /// Number of grid points attaining the minimum.
    pub minimizers: u64,
}

/// Exhaustive minimisation of the dominant exponent over
/// `(ε, ε′, δ) ∈ {1/r, …, (r−1)/r}³`, in exact integer arithmetic.
///
/// Ties keep the lexicographically smallest `(ε, ε′, δ)`.
pub fn optimize_params(resolution: u32) -> GridOptimum {
    assert!(resolution >= 2, "grid needs an interior point");
    let r = i64::from(resolution);
    // Every term scaled by 2r is an integer.
    let mut best = (i64::MAX, 0, 0, 0);
    let mut count = 0u64;
    for a in 1..r {
        for b in 1..r {
            let e3 = 3 * r - b;
            for c in 1..r {
                let gap = c.min(a - c - b);
                let d = (2 * r + 2 * a)
                    .max(2 * r + 2 * b + 2 * c)
                    .max(e3)
                    .max(3 * r - gap);
                if d < best.0 {
                    best = (d, a, b, c);
                    count = 1;
                } else if d == best.0 {
                    count += 1;
                }
            }
        }
    }
    let (d, a, b, c) = best;
    GridOptimum {
        resolution,
        epsilon: Ratio::new(a, r),
        epsilon_prime: Ratio::new(b, r),
        delta: Ratio::new(c, r),
        dominant: Ratio::new(d, 2 * r),
        minimizers: count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(e: f64, ep: f64, d: f64) -> Params {
        Params {
            epsilon: e,
            epsilon_prime: ep,
            delta: d,
            ..Params::default()
        }
    }

    #[test]
    fn default_terms() {
        let t = cost_terms(&Params::default());
        for (got, want) in [
            (t.e1, 10.0 / 7.0),
            (t.e2, 9.0 / 7.0),
            (t.e3, 10.0 / 7.0),
            (t.e4, 10.0 / 7.0),
        ] {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((t.dominant - 10.0 / 7.0).abs() < 1e-12);
        assert!(!t.degenerate);
    }

    #[test]
    fn other_points() {
        let t = cost_terms(&params(0.01, 0.01, 0.01));
        assert!(t.degenerate);
        assert!((t.dominant - t.e4).abs() < 1e-12);
        assert!((t.e4 - 1.505).abs() < 1e-12);

        let t = cost_terms(&params(0.5, 0.25, 0.125));
        assert!((t.dominant - 1.5).abs() < 1e-12);
        assert!((t.e4 - 1.4375).abs() < 1e-12);
        assert!((t.e2 - 1.375).abs() < 1e-12);
    }

    #[test]
    fn terms_are_not_symmetric() {
        let a = cost_terms(&params(3.0 / 7.0, 1.0 / 7.0, 1.0 / 7.0));
        let b = cost_terms(&params(1.0 / 7.0, 3.0 / 7.0, 1.0 / 7.0));
        assert_ne!(a, b);
    }

    #[test]
    fn exact_dominant_matches_float() {
        let d = dominant_exact(Ratio::new(3, 7), Ratio::new(1, 7), Ratio::new(1, 7));
        assert_eq!(d, Ratio::new(10, 7));
    }

    #[test]
    fn coarse_grid_finds_the_sevenths() {
        let o = optimize_params(7);
        assert_eq!(
            (o.epsilon, o.epsilon_prime, o.delta),
            (Ratio::new(3, 7), Ratio::new(1, 7), Ratio::new(1, 7))
        );
        assert_eq!(o.dominant, Ratio::new(10, 7));
    }
}

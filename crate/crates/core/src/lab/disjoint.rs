//! Probability that a fixed `x`-set and a uniform random `y`-set of `[n]` are disjoint.

use serde::{Deserialize, Serialize};

/// `C(n−x, y) / C(n, y) = Π_{i<y} (n−x−i)/(n−i)`; zero when `x + y > n`.
pub fn disjointness_prob_exact(n: u64, x: u64, y: u64) -> f64 {
    assert!(x <= n && y <= n, "set sizes exceed n");
    if x + y > n {
        return 0.0;
    }
    // Every factor is at most 1, so the running product cannot overflow.
    (0..y)
        .map(|i| (n - x - i) as f64 / (n - i) as f64)
        .product()
}

/// Natural log of [`disjointness_prob_exact`], `−∞` when the sets cannot be disjoint.
pub fn disjointness_ln_exact(n: u64, x: u64, y: u64) -> f64 {
    assert!(x <= n && y <= n, "set sizes exceed n");
    if x + y > n {
        return f64::NEG_INFINITY;
    }
    (0..y)
        .map(|i| ((n - x - i) as f64 / (n - i) as f64).ln())
        .sum()
}

/// `(1 − pq)^n`.
pub fn disjointness_prob_approx(n: u64, p: f64, q: f64) -> f64 {
    (1.0 - p * q).powf(n as f64)
}

/// `|ln(exact) / (n·ln(1 − pq)) − 1|` with `p = x/n`, `q = y/n`; zero when
/// either set is empty (both sides are exactly 1).
pub fn disjointness_relative_error(n: u64, x: u64, y: u64) -> f64 {
    if x == 0 || y == 0 {
        return 0.0;
    }
    let (p, q) = (x as f64 / n as f64, y as f64 / n as f64);
    let approx = n as f64 * (-p * q).ln_1p();
    (disjointness_ln_exact(n, x, y) / approx - 1.0).abs()
}

/// Tolerance `10·(p³ + q³ + 1/n)` of the approximation.
pub fn disjointness_tolerance(n: u64, p: f64, q: f64) -> f64 {
    10.0 * (p.powi(3) + q.powi(3) + 1.0 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisjointnessPoint {
    pub n: u64,
    pub x: u64,
    pub y: u64,
    pub p: f64,
    pub q: f64,
    pub error: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Sweep over `p, q ∈ {0.02, 0.04, …, 0.2}` and `n ∈ {20, 40, …, 200}`, with
/// `x = round(pn)`, `y = round(qn)`; the error is measured at the realised
/// ratios `x/n`, `y/n`.
pub fn disjointness_sweep() -> Vec<DisjointnessPoint> {
    let mut out = Vec::new();
    for n in (20..=200).step_by(20) {
        for i in 1..=10 {
            for j in 1..=10 {
                let x = (f64::from(i) * 0.02 * n as f64).round() as u64;
                let y = (f64::from(j) * 0.02 * n as f64).round() as u64;
                let (p, q) = (x as f64 / n as f64, y as f64 / n as f64);
                let error = disjointness_relative_error(n, x, y);
                let tolerance = disjointness_tolerance(n, p, q);
                out.push(DisjointnessPoint {
                    n,
                    x,
                    y,
                    p,
                    q,
                    error,
                    tolerance,
                    holds: error <= tolerance,
                });
            }
        }
    }
    out
}

//! Approximate counting by phase estimation on the Grover iterate.
//!
//! With `M` controlled iterations the estimate register reads `y` with
//! probability `½[F_M(y/M − θ/π) + F_M(y/M + θ/π)]`, where
//! `F_M(x) = sin²(Mπx) / (M² sin²(πx))` is the Fejér kernel.

use std::f64::consts::PI;

use rand::Rng;

use super::rotation_angle;
use crate::oracle::{OracleError, QueryLedger, StepTag};

/// Precision of the refining run relative to the level that first saw a nonzero phase.
const REFINE_FACTOR: u64 = 16;

fn fejer(m: u64, x: f64) -> f64 {
    let s = (PI * x).sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let num = (m as f64 * PI * x).sin();
    (num * num) / ((m * m) as f64 * s * s)
}

/// Outcome distribution of an `M`-point phase estimation for angle `θ`.
pub fn phase_estimate_distribution(m: u64, theta: f64) -> Vec<f64> {
    let phi = theta / PI;
    (0..m)
        .map(|y| {
            let x = y as f64 / m as f64;
            0.5 * (fejer(m, x - phi) + fejer(m, x + phi))
        })
        .collect()
}

pub fn sample_phase_estimate<R: Rng + ?Sized>(m: u64, theta: f64, rng: &mut R) -> u64 {
    let dist = phase_estimate_distribution(m, theta);
    let total: f64 = dist.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (y, p) in dist.iter().enumerate() {
        if u < *p {
            return y as u64;
        }
        u -= p;
    }
    m - 1
}

/// Estimates the number of marked items among `size`, billing `(M−1)·q`
/// per phase-estimation run under `tag`.
///
/// Levels `M = 2, 4, …` up to the first power of two `≥ 8√N` are tried until
/// one reads a nonzero phase; a single run at `16M` then fixes the estimate.
/// Returns 0 (and spends `O(√N·q)`) when every level reads zero.
pub fn estimate_marked<R: Rng + ?Sized>(
    size: u64,
    marked: u64,
    query_cost: u64,
    ledger: &mut QueryLedger,
    tag: StepTag,
    rng: &mut R,
) -> Result<u64, OracleError> {
    if size == 0 {
        return Ok(0);
    }
    let theta = rotation_angle(size, marked);
    let top = ((8.0 * (size as f64).sqrt()).ceil() as u64)
        .next_power_of_two()
        .max(2);
    let mut m = 2;
    loop {
        ledger.charge((m - 1) * query_cost, tag)?;
        if sample_phase_estimate(m, theta, rng) != 0 {
            let fine = REFINE_FACTOR * m;
            ledger.charge((fine - 1) * query_cost, tag)?;
            let y = sample_phase_estimate(fine, theta, rng);
            let est = size as f64 * (PI * y as f64 / fine as f64).sin().powi(2);
            return Ok((est.round() as u64).clamp(1, size));
        }
        if m >= top {
            return Ok(0);
        }
        m *= 2;
    }
}

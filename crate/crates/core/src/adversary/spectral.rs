//! Largest eigenvalue of a nonnegative symmetric matrix by power iteration.

use super::{AdversaryError, AdversaryMatrix, MAX_DOMAIN};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const ITERATION_CAP: usize = 100_000;

/// Iterations without a tenfold residual improvement before the shift is applied.
const STALL_WINDOW: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit-norm, entrywise nonnegative.
    pub vector: Vec<f64>,
    pub iterations: usize,
    /// Whether the iteration ran on `M + cI`.
    pub shifted: bool,
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Runs power iteration on `M + shift·I`. Returns `None` on stall or cap.
fn iterate(
    m: &AdversaryMatrix,
    shift: f64,
    tol: f64,
    cap: usize,
    detect_stall: bool,
) -> Option<Eigenpair> {
    let d = m.dim();
    let mut x = vec![1.0; d];
    normalize(&mut x);
    let mut y = vec![0.0; d];
    let mut best = f64::INFINITY;
    let mut since_best = 0;
    for it in 1..=cap {
        m.mul_vec(&x, &mut y);
        y.iter_mut().zip(&x).for_each(|(yi, xi)| *yi += shift * xi);
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let resid = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - lambda * a).powi(2))
            .sum::<f64>()
            .sqrt();
        if resid <= tol * lambda.abs().max(f64::MIN_POSITIVE) {
            return Some(Eigenpair {
                value: lambda - shift,
                vector: x,
                iterations: it,
                shifted: shift != 0.0,
            });
        }
        if resid < 0.1 * best {
            best = resid;
            since_best = 0;
        } else {
            since_best += 1;
            if detect_stall && since_best > STALL_WINDOW {
                return None;
            }
        }
        if normalize(&mut y) == 0.0 {
            return None;
        }
        std::mem::swap(&mut x, &mut y);
    }
    None
}

/// Largest eigenvalue of a symmetric nonnegative matrix and a nonnegative unit eigenvector.
///
/// Iterates from the all-ones vector. A bipartite zero pattern makes `−λ`
/// an eigenvalue as well and the plain iteration oscillates; on stall or cap
/// the iteration restarts on `M + cI` with `c` half the largest row sum.
pub fn spectral_norm(m: &AdversaryMatrix, tol: f64) -> Result<Eigenpair, AdversaryError> {
    let d = m.dim();
    if d > MAX_DOMAIN {
        return Err(AdversaryError::InvalidMatrix(format!(
            "dimension {d} exceeds {MAX_DOMAIN}"
        )));
    }
    for i in 0..d {
        for j in 0..d {
            let v = m.get(i, j);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(AdversaryError::InvalidMatrix(format!(
                    "entry ({i},{j}) = {v} is not a nonnegative real"
                )));
            }
            if j > i && v != m.get(j, i) {
                return Err(AdversaryError::InvalidMatrix(format!(
                    "not symmetric at ({i},{j})"
                )));
            }
        }
    }
    if d == 0 || m.is_zero() {
        let mut v = vec![1.0; d];
        normalize(&mut v);
        return Ok(Eigenpair {
            value: 0.0,
            vector: v,
            iterations: 0,
            shifted: false,
        });
    }
    if let Some(p) = iterate(m, 0.0, tol, ITERATION_CAP, true) {
        return Ok(p);
    }
    let shift = 0.5 * m.max_row_sum();
    iterate(m, shift, tol, ITERATION_CAP, false)
        .ok_or(AdversaryError::NoConvergence { cap: ITERATION_CAP })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> AdversaryMatrix {
        AdversaryMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn closed_forms() {
        let p = spectral_norm(&mat(&[&[1.0, 1.0], &[1.0, 1.0]]), DEFAULT_TOLERANCE).unwrap();
        assert!((p.value - 2.0).abs() < 1e-9);
        let star = mat(&[&[0.0, 1.0, 1.0], &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        let p = spectral_norm(&star, DEFAULT_TOLERANCE).unwrap();
        assert!((p.value - 2f64.sqrt()).abs() < 1e-9, "{}", p.value);
        assert!(p.shifted);
        assert!(p.vector.iter().all(|&v| v >= 0.0));
        assert_eq!(
            spectral_norm(&AdversaryMatrix::zeros(4), DEFAULT_TOLERANCE)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn symmetric_two_by_two() {
        // [[a, b], [b, c]]: λ = (a + c)/2 + √(((a − c)/2)² + b²).
        for &(a, b, c) in &[
            (0.0, 1.0, 0.0),
            (2.0, 0.5, 1.0),
            (0.3, 0.0, 0.7),
            (5.0, 3.0, 5.0),
        ] {
            let want = (a + c) / 2.0 + (((a - c) / 2.0f64).powi(2) + b * b).sqrt();
            let got = spectral_norm(&mat(&[&[a, b], &[b, c]]), DEFAULT_TOLERANCE)
                .unwrap()
                .value;
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1.0),
                "{a} {b} {c}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(spectral_norm(&mat(&[&[0.0, 1.0], &[2.0, 0.0]]), DEFAULT_TOLERANCE).is_err());
        assert!(spectral_norm(&mat(&[&[0.0, -1.0], &[-1.0, 0.0]]), DEFAULT_TOLERANCE).is_err());
    }
}

//! Spectral adversary bound for small partial Boolean functions, and the
//! certificate barrier `λ(Γ)/maxᵢ λ(Γᵢ) ≤ 2√(nk)`.

mod certificate;
mod function;
mod spectral;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use certificate::{certificate_size, Certificates, MAX_CERTIFICATE_VARIABLES};
pub use function::{AdversaryMatrix, FunctionFile, MatrixFile, PartialBooleanFunction, MAX_DOMAIN};
pub use spectral::{spectral_norm, Eigenpair, DEFAULT_TOLERANCE, ITERATION_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid adversary matrix: {0}")]
    InvalidGamma(GammaViolation),
    #[error("position {i} outside 1..={n}")]
    PositionOutOfRange { i: usize, n: usize },
    #[error("every Γ_i is zero; the adversary ratio is undefined")]
    UndefinedRatio,
    #[error("power iteration did not converge within {cap} iterations")]
    NoConvergence { cap: usize },
    #[error("{n} variables exceed the exhaustive-search limit {max}")]
    TooManyVariables { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaViolation {
    Dimension { matrix: usize, domain: usize },
    Negative { x: String, y: String, value: f64 },
    Asymmetric { x: String, y: String },
    EqualValues { x: String, y: String, value: f64 },
    AllZero,
}

impl std::fmt::Display for GammaViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GammaViolation::Dimension { matrix, domain } => {
                write!(
                    f,
                    "matrix is {matrix}×{matrix} but the domain has {domain} inputs"
                )
            }
            GammaViolation::Negative { x, y, value } => {
                write!(f, "Γ[{x},{y}] = {value} is negative")
            }
            GammaViolation::Asymmetric { x, y } => write!(f, "Γ[{x},{y}] ≠ Γ[{y},{x}]"),
            GammaViolation::EqualValues { x, y, value } => {
                write!(f, "Γ[{x},{y}] = {value} although f({x}) = f({y})")
            }
            GammaViolation::AllZero => f.write_str("Γ has no positive entry"),
        }
    }
}

/// Checks dimension, nonnegativity, symmetry and the zero pattern, reporting
/// the first violation in row-major order.
pub fn validate_gamma(
    f: &PartialBooleanFunction,
    gamma: &AdversaryMatrix,
) -> Result<(), GammaViolation> {
    if gamma.dim() != f.len() {
        return Err(GammaViolation::Dimension {
            matrix: gamma.dim(),
            domain: f.len(),
        });
    }
    let name = |i: usize| function::word(f.input(i));
    let mut positive = false;
    for x in 0..f.len() {
        for y in 0..f.len() {
            let v = gamma.get(x, y);
            if !(v >= 0.0) {
                return Err(GammaViolation::Negative {
                    x: name(x),
                    y: name(y),
                    value: v,
                });
            }
            if v != gamma.get(y, x) {
                return Err(GammaViolation::Asymmetric {
                    x: name(x),
                    y: name(y),
                });
            }
            if v > 0.0 && f.value(x) == f.value(y) {
                return Err(GammaViolation::EqualValues {
                    x: name(x),
                    y: name(y),
                    value: v,
                });
            }
            positive |= v > 0.0;
        }
    }
    if positive {
        Ok(())
    } else {
        Err(GammaViolation::AllZero)
    }
}

/// `Γᵢ`: `Γ` with entries zeroed wherever the two inputs agree at position `i` (1-based).
pub fn gamma_i(
    f: &PartialBooleanFunction,
    gamma: &AdversaryMatrix,
    i: usize,
) -> Result<AdversaryMatrix, AdversaryError> {
    if i == 0 || i > f.n() {
        return Err(AdversaryError::PositionOutOfRange { i, n: f.n() });
    }
    let mut out = AdversaryMatrix::zeros(gamma.dim());
    for x in 0..f.len() {
        for y in 0..f.len() {
            if f.input(x)[i - 1] != f.input(y)[i - 1] {
                out.set(x, y, gamma.get(x, y));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryValue {
    pub lambda: f64,
    pub lambda_i: Vec<f64>,
    pub raw_ratio: f64,
    pub qqc_lower_bound: f64,
}

/// `λ(Γ) / maxᵢ λ(Γᵢ)` and the bound `(1 − 2√(ε(1−ε)))·ratio/2`.
pub fn adversary_value(
    f: &PartialBooleanFunction,
    gamma: &AdversaryMatrix,
    epsilon: f64,
) -> Result<AdversaryValue, AdversaryError> {
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(AdversaryError::InvalidFunction(format!(
            "error parameter {epsilon} outside [0, 1/2]"
        )));
    }
    validate_gamma(f, gamma).map_err(AdversaryError::InvalidGamma)?;
    let lambda = spectral_norm(gamma, DEFAULT_TOLERANCE)?.value;
    let lambda_i = (1..=f.n())
        .map(|i| spectral_norm(&gamma_i(f, gamma, i)?, DEFAULT_TOLERANCE).map(|p| p.value))
        .collect::<Result<Vec<_>, _>>()?;
    let max_i = lambda_i.iter().copied().fold(0.0, f64::max);
    if max_i == 0.0 {
        return Err(AdversaryError::UndefinedRatio);
    }
    let raw_ratio = lambda / max_i;
    let factor = 1.0 - 2.0 * (epsilon * (1.0 - epsilon)).sqrt();
    Ok(AdversaryValue {
        lambda,
        lambda_i,
        raw_ratio,
        qqc_lower_bound: factor.max(0.0) * raw_ratio / 2.0,
    })
}

/// Uniform `[0,1)` entries on every pair with different values, mirrored to be symmetric.
pub fn random_gamma<R: Rng + ?Sized>(f: &PartialBooleanFunction, rng: &mut R) -> AdversaryMatrix {
    let mut g = AdversaryMatrix::zeros(f.len());
    for x in 0..f.len() {
        for y in (x + 1)..f.len() {
            if f.value(x) != f.value(y) {
                g.set_sym(x, y, rng.gen::<f64>());
            }
        }
    }
    g
}

/// Uniform star: weight 1 between the all-zero input and each weight-one input.
pub fn or_star(n: usize) -> (PartialBooleanFunction, AdversaryMatrix) {
    let f = PartialBooleanFunction::or_promise(n);
    let mut g = AdversaryMatrix::zeros(f.len());
    for i in 1..f.len() {
        g.set_sym(0, i, 1.0);
    }
    (f, g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierCheck {
    pub n: usize,
    pub k: usize,
    pub raw_ratio: f64,
    /// `2√(nk)`.
    pub barrier: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Compares the adversary ratio with `2√(nk)`. A `Γ` whose ratio is
/// undefined counts as ratio 0.
pub fn barrier_check(
    f: &PartialBooleanFunction,
    gamma: &AdversaryMatrix,
) -> Result<BarrierCheck, AdversaryError> {
    let k = certificate_size(f)?.k;
    let barrier = 2.0 * ((f.n() * k) as f64).sqrt();
    let raw_ratio = match adversary_value(f, gamma, 0.0) {
        Ok(v) => v.raw_ratio,
        Err(AdversaryError::UndefinedRatio)
        | Err(AdversaryError::InvalidGamma(GammaViolation::AllZero)) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(BarrierCheck {
        n: f.n(),
        k,
        raw_ratio,
        barrier,
        slack: barrier - raw_ratio,
        holds: raw_ratio <= barrier + 1e-8,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs` for inequalities, `−|lhs − rhs|` for equalities.
    pub slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    pub lambda: f64,
    pub k: usize,
    /// Whether the top eigenvector is strictly positive; when it is not,
    /// every check is evaluated on its support.
    pub vector_positive: bool,
    pub support: usize,
    pub checks: Vec<ChainCheck>,
}

impl ProofChain {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates each step of the barrier argument numerically: with `v` the top
/// eigenvector of `Γ` and `vᵢ` its restriction to the 1-inputs whose
/// certificate contains `i`,
///
/// - `⟨vᵢ, v⟩ = ⟨vᵢ, vᵢ⟩` for every `i`;
/// - `v₁ + … + vₙ ≤ k·v` entrywise;
/// - `Σᵢ vᵢ Γᵢ v ≥ v Γ′ v = λ/2`, with `Γ′` the 1-row, 0-column part of `Γ`;
/// - `λ(Γ)/maxᵢ λ(Γᵢ) ≤ 2 Σᵢ |vᵢ| ≤ 2√(nk)`.
pub fn proof_chain(
    f: &PartialBooleanFunction,
    gamma: &AdversaryMatrix,
    tol: f64,
) -> Result<ProofChain, AdversaryError> {
    validate_gamma(f, gamma).map_err(AdversaryError::InvalidGamma)?;
    let certs = certificate_size(f)?;
    let top = spectral_norm(gamma, DEFAULT_TOLERANCE)?;
    let (lambda, v) = (top.value, top.vector);
    let d = f.len();
    let n = f.n();
    let support = v.iter().filter(|&&x| x > 0.0).count();

    let vi: Vec<Vec<f64>> = (1..=n)
        .map(|i| {
            (0..d)
                .map(|x| match certs.of(x) {
                    Some(a) if a.contains(&i) => v[x],
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut checks = Vec::new();
    let mut le = |name: String, lhs: f64, rhs: f64| {
        checks.push(ChainCheck {
            name,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: lhs <= rhs + tol,
        })
    };

    let mut equalities = Vec::new();
    for (i, w) in vi.iter().enumerate() {
        let (lhs, rhs) = (dot(w, &v), dot(w, w));
        equalities.push(ChainCheck {
            name: format!("<v_{},v> = <v_{},v_{}>", i + 1, i + 1, i + 1),
            lhs,
            rhs,
            slack: -(lhs - rhs).abs(),
            holds: (lhs - rhs).abs() <= tol,
        });
    }

    let k = certs.k as f64;
    let worst = (0..d)
        .map(|x| vi.iter().map(|w| w[x]).sum::<f64>() - k * v[x])
        .fold(f64::NEG_INFINITY, f64::max);
    le("sum_i v_i <= k v (worst entry)".into(), worst, 0.0);

    let mut gamma_prime = AdversaryMatrix::zeros(d);
    for x in f.ones() {
        for y in f.zeros() {
            gamma_prime.set(x, y, gamma.get(x, y));
        }
    }
    let half = gamma_prime.bilinear(&v, &v);
    let mut lambda_i = Vec::with_capacity(n);
    let mut weighted = 0.0;
    for (i, w) in vi.iter().enumerate() {
        let gi = gamma_i(f, gamma, i + 1)?;
        weighted += gi.bilinear(w, &v);
        lambda_i.push(spectral_norm(&gi, DEFAULT_TOLERANCE)?.value);
    }
    equalities.push(ChainCheck {
        name: "v Γ' v = λ/2".into(),
        lhs: half,
        rhs: lambda / 2.0,
        slack: -(half - lambda / 2.0).abs(),
        holds: (half - lambda / 2.0).abs() <= tol,
    });
    le("v Γ' v <= sum_i v_i Γ_i v".into(), half, weighted);

    let norms: f64 = vi.iter().map(|w| dot(w, w).sqrt()).sum();
    let max_i = lambda_i.iter().copied().fold(0.0, f64::max);
    let ratio = if max_i > 0.0 { lambda / max_i } else { 0.0 };
    le(
        "λ(Γ)/max λ(Γ_i) <= 2 sum_i |v_i|".into(),
        ratio,
        2.0 * norms,
    );
    let sq: f64 = vi.iter().map(|w| dot(w, w)).sum();
    le(
        "sum_i |v_i| <= sqrt(n sum_i |v_i|^2)".into(),
        norms,
        (n as f64 * sq).sqrt(),
    );
    le(
        "sqrt(n sum_i |v_i|^2) <= sqrt(nk)".into(),
        (n as f64 * sq).sqrt(),
        (n as f64 * k).sqrt(),
    );

    equalities.extend(checks);
    Ok(ProofChain {
        lambda,
        k: certs.k,
        vector_positive: support == d,
        support,
        checks: equalities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn or2_star() -> (PartialBooleanFunction, AdversaryMatrix) {
        let f = PartialBooleanFunction::or(2);
        let mut g = AdversaryMatrix::zeros(4);
        g.set_sym(0, 1, 1.0);
        g.set_sym(0, 2, 1.0);
        (f, g)
    }

    #[test]
    fn or2_star_example() {
        let (f, g) = or2_star();
        assert_eq!(validate_gamma(&f, &g), Ok(()));
        let g1 = gamma_i(&f, &g, 1).unwrap();
        assert_eq!(g1.get(0, 2), 1.0);
        assert_eq!(g1.get(0, 1), 0.0);
        let g2 = gamma_i(&f, &g, 2).unwrap();
        assert_eq!(g2.get(0, 1), 1.0);
        assert_eq!(g2.get(0, 2), 0.0);
        assert!(gamma_i(&f, &g, 3).is_err());

        let v = adversary_value(&f, &g, 0.0).unwrap();
        assert!((v.raw_ratio - 2f64.sqrt()).abs() < 1e-9);
        assert!((v.qqc_lower_bound - v.raw_ratio / 2.0).abs() < 1e-15);
        assert_eq!(adversary_value(&f, &g, 0.5).unwrap().qqc_lower_bound, 0.0);

        let b = barrier_check(&f, &g).unwrap();
        assert!((b.barrier - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(b.holds);
    }

    #[test]
    fn invalid_gammas_are_located() {
        let (f, mut g) = or2_star();
        g.set_sym(1, 3, 0.5);
        assert_eq!(
            validate_gamma(&f, &g),
            Err(GammaViolation::EqualValues {
                x: "01".into(),
                y: "11".into(),
                value: 0.5
            })
        );
        let (f, mut g) = or2_star();
        g.set(1, 0, 0.25);
        assert!(matches!(
            validate_gamma(&f, &g),
            Err(GammaViolation::Asymmetric { .. })
        ));
        assert_eq!(
            validate_gamma(&f, &AdversaryMatrix::zeros(4)),
            Err(GammaViolation::AllZero)
        );
        assert!(matches!(
            validate_gamma(&f, &AdversaryMatrix::zeros(3)),
            Err(GammaViolation::Dimension { .. })
        ));
    }

    #[test]
    fn agreeing_position_gives_zero_matrix() {
        let f = PartialBooleanFunction::new(2, 2, vec![vec![0, 0], vec![0, 1]], vec![false, true])
            .unwrap();
        let mut g = AdversaryMatrix::zeros(2);
        g.set_sym(0, 1, 1.0);
        assert!(gamma_i(&f, &g, 1).unwrap().is_zero());
    }

    #[test]
    fn zero_gamma_has_full_slack() {
        let f = PartialBooleanFunction::or(2);
        let b = barrier_check(&f, &AdversaryMatrix::zeros(4)).unwrap();
        assert_eq!(b.raw_ratio, 0.0);
        assert_eq!(b.slack, b.barrier);
    }

    #[test]
    fn star_ratio_is_sqrt_n() {
        for n in [2, 4, 9, 16] {
            let (f, g) = or_star(n);
            let v = adversary_value(&f, &g, 0.0).unwrap();
            assert!(
                (v.raw_ratio - (n as f64).sqrt()).abs() < 1e-9,
                "n={n}: {}",
                v.raw_ratio
            );
        }
    }

    #[test]
    fn random_gammas_are_valid() {
        let f = PartialBooleanFunction::and(3);
        let mut rng = substream(0, "gamma", 0);
        for _ in 0..20 {
            let g = random_gamma(&f, &mut rng);
            assert_eq!(validate_gamma(&f, &g), Ok(()));
        }
    }

    #[test]
    fn or4_chain_holds() {
        let (f, g) = or_star(4);
        let c = proof_chain(&f, &g, 1e-9).unwrap();
        assert!(c.all_hold(), "{:#?}", c.checks);
        assert!(c.vector_positive);
        assert_eq!(c.k, 1);
    }
}

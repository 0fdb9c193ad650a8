use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use qtri_core::adversary::{
    adversary_value, barrier_check, certificate_size, gamma_i, or_star, proof_chain, random_gamma,
    spectral_norm, validate_gamma, AdversaryError, AdversaryMatrix, PartialBooleanFunction,
    DEFAULT_TOLERANCE,
};
use qtri_core::rng::substream;

fn dense(m: &AdversaryMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j))
}

/// Largest eigenvalue from a full symmetric eigendecomposition.
fn lambda_max(m: &AdversaryMatrix) -> f64 {
    SymmetricEigen::new(dense(m))
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Certificate size by brute force over all position subsets.
fn brute_certificate(f: &PartialBooleanFunction) -> usize {
    let n = f.n();
    f.ones()
        .map(|x| {
            (0u32..1 << n)
                .filter(|&s| {
                    f.zeros()
                        .all(|y| (0..n).any(|i| s >> i & 1 == 1 && f.input(x)[i] != f.input(y)[i]))
                })
                .map(|s| s.count_ones() as usize)
                .min()
                .unwrap()
        })
        .max()
        .unwrap()
}

#[test]
fn power_iteration_agrees_with_eigendecomposition() {
    for (i, f) in [
        PartialBooleanFunction::or(3),
        PartialBooleanFunction::and(4),
        PartialBooleanFunction::or_promise(6),
        PartialBooleanFunction::total(4, |x| x.iter().filter(|&&b| b == 1).count() == 2),
    ]
    .iter()
    .enumerate()
    {
        for s in 0..20 {
            let g = random_gamma(f, &mut substream(s, "eig", i as u64));
            let want = lambda_max(&g);
            let got = spectral_norm(&g, DEFAULT_TOLERANCE).unwrap();
            assert!(
                (got.value - want).abs() <= 1e-8 * want.max(1.0),
                "{} vs {want}",
                got.value
            );
            assert!(got.vector.iter().all(|&v| v >= -1e-12));
        }
    }
}

#[test]
fn certificates_match_brute_force() {
    let fns = [
        PartialBooleanFunction::or(4),
        PartialBooleanFunction::and(4),
        PartialBooleanFunction::triangle3(),
        PartialBooleanFunction::or_promise(5),
        PartialBooleanFunction::total(4, |x| x[0] == x[3]),
        PartialBooleanFunction::total(5, |x| x.iter().filter(|&&b| b == 1).count() >= 3),
    ];
    for f in &fns {
        assert_eq!(certificate_size(f).unwrap().k, brute_certificate(f));
    }
}

#[test]
fn certificates_really_certify() {
    let f = PartialBooleanFunction::total(5, |x| x.iter().filter(|&&b| b == 1).count() >= 3);
    let c = certificate_size(&f).unwrap();
    for x in f.ones() {
        let a = c.of(x).unwrap();
        for y in f.zeros() {
            assert!(a.iter().any(|&i| f.input(x)[i - 1] != f.input(y)[i - 1]));
        }
    }
}

#[test]
fn gamma_i_keeps_exactly_the_disagreeing_entries() {
    let f = PartialBooleanFunction::or(3);
    let g = random_gamma(&f, &mut substream(1, "gi", 0));
    for i in 1..=3 {
        let gi = gamma_i(&f, &g, i).unwrap();
        for x in 0..f.len() {
            for y in 0..f.len() {
                let want = if f.input(x)[i - 1] != f.input(y)[i - 1] {
                    g.get(x, y)
                } else {
                    0.0
                };
                assert_eq!(gi.get(x, y), want);
            }
        }
    }
}

#[test]
fn star_proof_chain_for_several_sizes() {
    for n in [2, 3, 4, 8] {
        let (f, g) = or_star(n);
        let c = proof_chain(&f, &g, 1e-9).unwrap();
        assert!(c.all_hold(), "n={n}: {:#?}", c.checks);
    }
}

#[test]
fn proof_chain_on_reducible_gamma_reports_support() {
    // Only one edge: the top eigenvector vanishes on the other inputs.
    let f = PartialBooleanFunction::or(2);
    let mut g = AdversaryMatrix::zeros(4);
    g.set_sym(0, 3, 1.0);
    let c = proof_chain(&f, &g, 1e-9).unwrap();
    assert!(!c.vector_positive);
    assert_eq!(c.support, 2);
    assert!(c.all_hold());
}

#[test]
fn invalid_gamma_is_an_error() {
    let f = PartialBooleanFunction::and(2);
    let mut g = AdversaryMatrix::zeros(4);
    g.set_sym(0, 1, 1.0);
    assert!(validate_gamma(&f, &g).is_err());
    assert!(matches!(
        adversary_value(&f, &g, 0.0),
        Err(AdversaryError::InvalidGamma(_))
    ));
    assert!(certificate_size(&PartialBooleanFunction::or(21)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn barrier_holds_on_random_partial_functions(
        n in 2usize..=5,
        bits in proptest::collection::vec(0u8..3, 32),
        seed in any::<u64>(),
    ) {
        // 0 and 1 assign a value, 2 leaves the input outside the domain.
        let mut domain = Vec::new();
        let mut values = Vec::new();
        for (m, &b) in bits.iter().enumerate().take(1 << n) {
            match b {
                2 => {}
                v => {
                    domain.push((0..n).map(|i| ((m >> i) & 1) as u8).collect::<Vec<u8>>());
                    values.push(v == 1);
                }
            }
        }
        prop_assume!(values.iter().any(|&v| v) && values.iter().any(|&v| !v));
        let f = PartialBooleanFunction::new(n, 2, domain, values).unwrap();
        let g = random_gamma(&f, &mut substream(seed, "fuzz", 0));
        let b = barrier_check(&f, &g).unwrap();
        prop_assert!(b.raw_ratio <= b.barrier + 1e-8, "{} > {}", b.raw_ratio, b.barrier);
        let v = adversary_value(&f, &g, 0.0).unwrap();
        prop_assert!((v.lambda - lambda_max(&g)).abs() <= 1e-8 * v.lambda.max(1.0));
        let chain = proof_chain(&f, &g, 1e-7).unwrap();
        prop_assert!(chain.all_hold(), "{:#?}", chain.checks);
    }
}

//! Batches of seeded runs, the folklore baseline, and log-log scaling fits.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{generate, GraphError, GraphKind};
use crate::grover::safe_grover;
use crate::oracle::{LedgerReport, OracleError, QueryOracle, StepTag};
use crate::rng::{child_seed, substream};
use crate::solver::{
    solve, step1_sample, AllTriplesSpace, CandidateGraph, Outcome, Params, SolveError,
};

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Invalid(String),
}

/// Which algorithm a bench row was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Solver,
    Baseline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: u32,
    /// Seed of the run; the instance is generated from the same seed.
    pub seed: u64,
    pub found: bool,
    pub cost: LedgerReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// `(n, mean total queries)`.
    pub points: Vec<(u32, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// `mean_cost / (n^{10/7}·(ln n)²)` per point.
    pub normalized_constants: Vec<f64>,
}

/// Least squares on `(ln n, ln mean_cost)`.
pub fn fit_scaling(points: &[(u32, f64)]) -> Result<ScalingFit, LabError> {
    if points.len() < 3 {
        return Err(LabError::Invalid(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| f64::from(n).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| c.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(LabError::Invalid("all points share one n".into()));
    }
    let slope = sxy / sxx;
    Ok(ScalingFit {
        points: points.to_vec(),
        slope,
        intercept: my - slope * mx,
        normalized_constants: points
            .iter()
            .map(|&(n, c)| {
                let nf = f64::from(n);
                c / (nf.powf(10.0 / 7.0) * nf.ln().powi(2))
            })
            .collect(),
    })
}

/// Safe Grover over all `C(n,3)` triples with a 3-query item test.
pub fn baseline_search(
    oracle: &mut QueryOracle<'_>,
    c_safe: f64,
    seed: u64,
) -> Result<bool, OracleError> {
    let space = AllTriplesSpace::new(oracle.simulator_view());
    let out = safe_grover(
        &space,
        c_safe,
        oracle.ledger_mut(),
        StepTag::Step9,
        &mut substream(seed, "baseline", 0),
    )?;
    match out.found {
        Some(t) => oracle.verify(&t),
        None => Ok(false),
    }
}

/// Seed of trial `i` at size `n` under a batch seed.
pub fn trial_seed(seed: u64, n: u32, trial: u64) -> u64 {
    child_seed(seed, "trial", (u64::from(n) << 32) | trial)
}

/// Runs `trials` seeded instances per `n`; rows come back sorted by `(n, seed)`.
pub fn run_batch(
    algorithm: Algorithm,
    kind: GraphKind,
    ns: &[u32],
    trials: u64,
    params: &Params,
    seed: u64,
) -> Result<Vec<BenchRow>, LabError> {
    let jobs: Vec<(u32, u64)> = ns
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, trial_seed(seed, n, t))))
        .collect();
    let mut rows = jobs
        .into_par_iter()
        .map(|(n, s)| -> Result<BenchRow, LabError> {
            let g = generate(kind, n, s)?;
            let mut oracle = QueryOracle::new(&g);
            let found = match algorithm {
                Algorithm::Solver => !matches!(solve(&mut oracle, params, s)?.outcome, Outcome::No),
                Algorithm::Baseline => baseline_search(&mut oracle, params.c_safe, s)?,
            };
            Ok(BenchRow {
                n,
                seed: s,
                found,
                cost: oracle.report(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| (r.n, r.seed));
    Ok(rows)
}

/// Mean total cost per `n`, in increasing `n`.
pub fn mean_costs(rows: &[BenchRow]) -> Vec<(u32, f64)> {
    let mut out: Vec<(u32, f64, u64)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((n, sum, cnt)) if *n == r.n => {
                *sum += r.cost.total as f64;
                *cnt += 1;
            }
            _ => out.push((r.n, r.cost.total as f64, 1)),
        }
    }
    out.into_iter().map(|(n, s, c)| (n, s / c as f64)).collect()
}

/// Runs the batch and fits its scaling exponent.
pub fn empirical_scaling(
    algorithm: Algorithm,
    kind: GraphKind,
    ns: &[u32],
    trials: u64,
    params: &Params,
    seed: u64,
) -> Result<(Vec<BenchRow>, ScalingFit), LabError> {
    if ns.len() < 3 || ns.iter().any(|&n| n < 32) {
        return Err(LabError::Invalid(
            "need at least 3 sizes, each at least 32".into(),
        ));
    }
    let rows = run_batch(algorithm, kind, ns, trials, params, seed)?;
    let fit = fit_scaling(&mean_costs(&rows))?;
    Ok((rows, fit))
}

pub const CSV_HEADER: &str = "n,seed,outcome,total,classical,charged,step1,step2,step3,step4,step5,step6,step7,step8,step9,step10,verify";

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let c = &r.cost;
        write!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.seed,
            if r.found { "triangle" } else { "no" },
            c.total,
            c.classical,
            c.charged
        )
        .expect("writing to a String cannot fail");
        for tag in StepTag::ALL {
            write!(out, ",{}", c.step(tag)).expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

/// Fraction of trials whose candidate set (built from the sample alone,
/// without the Grover checks) contains a pair with more than `n^{1−ε}`
/// common neighbours.
pub fn lemma4_failure_rate(
    kind: GraphKind,
    n: u32,
    params: &Params,
    trials: u64,
    seed: u64,
) -> Result<f64, LabError> {
    if n < 8 {
        return Err(LabError::Invalid(format!("n must be at least 8, got {n}")));
    }
    let threshold = params.gprime_threshold(n);
    let violations = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool, LabError> {
            let s = trial_seed(seed, n, t);
            let g = generate(kind, n, s)?;
            let mut oracle = QueryOracle::with_budget(&g, None);
            let sample = step1_sample(&mut oracle, params, &mut substream(s, "step1", 0))?;
            let gprime = CandidateGraph::complement_of_squares(n, &sample.neighborhoods, 0);
            Ok(!gprime.within_threshold(&g, threshold))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&v| v)
        .count();
    Ok(violations as f64 / trials.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_is_recovered() {
        let pts: Vec<(u32, f64)> = [32u32, 64, 128, 256]
            .iter()
            .map(|&n| (n, 3.0 * f64::from(n).powf(1.5)))
            .collect();
        let f = fit_scaling(&pts).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(fit_scaling(&pts[..2]).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = run_batch(
            Algorithm::Solver,
            GraphKind::Complete,
            &[8, 9],
            2,
            &Params::default(),
            1,
        )
        .unwrap();
        let csv = bench_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 17));
        assert!(rows
            .windows(2)
            .all(|w| (w[0].n, w[0].seed) <= (w[1].n, w[1].seed)));
    }

    #[test]
    fn empty_graph_never_violates() {
        let r = lemma4_failure_rate(
            GraphKind::ErdosRenyi { p: 0.0 },
            16,
            &Params::default(),
            20,
            0,
        )
        .unwrap();
        assert_eq!(r, 0.0);
    }
}

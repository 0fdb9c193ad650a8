//! Numerical side of the cost analysis: exponent terms and their optimum,
//! the disjointness approximation, the candidate-set failure rate, and
//! empirical scaling of batches of runs.

mod disjoint;
mod scaling;
mod terms;

pub use disjoint::{
    disjointness_ln_exact, disjointness_prob_approx, disjointness_prob_exact,
    disjointness_relative_error, disjointness_sweep, disjointness_tolerance, DisjointnessPoint,
};
pub use scaling::{
    baseline_search, bench_csv, empirical_scaling, fit_scaling, lemma4_failure_rate, mean_costs,
    run_batch, trial_seed, Algorithm, BenchRow, LabError, ScalingFit, CSV_HEADER,
};
pub use terms::{cost_terms, dominant_exact, optimize_params, CostTerms, GridOptimum};

//! Cost-faithful stochastic models of Grover-type subroutines.
//!
//! Nothing here evolves a state vector. Each subroutine draws its measurement
//! outcome from the exact distribution implied by the rotation picture
//! (success after `k` iterations is `sin²((2k+1)θ)` with `sin²θ = m/N`),
//! using a simulator-privileged count of marked items, and bills the ledger
//! as if every iteration had physically applied the oracle.

mod counting;
mod edge_search;

use std::f64::consts::PI;

use rand::Rng;

use crate::oracle::{OracleError, QueryLedger, StepTag};

pub use counting::{estimate_marked, phase_estimate_distribution, sample_phase_estimate};
pub use edge_search::{edge_restricted_triangle_search, edge_search_cost_cap, EdgeSearchOutcome};

/// Growth factor of the unknown-count iteration schedule.
pub const SCHEDULE_GROWTH: f64 = 6.0 / 5.0;

/// Attempts made at the saturated level before a growing-schedule search gives up.
pub const SATURATED_ATTEMPTS: usize = 6;

/// A search space whose marked items the simulator can count and sample.
///
/// `marked_count` and `marked_item` are simulator privileges: they describe
/// the hidden ground truth and are never used to steer the algorithm.
pub trait SearchSpace {
    type Item;

    fn size(&self) -> u64;

    /// Oracle queries spent per evaluation of the item test.
    fn query_cost(&self) -> u64;

    fn marked_count(&self) -> u64;

    /// The `rank`-th marked item, `rank < marked_count()`.
    fn marked_item(&self, rank: u64) -> Self::Item;

    fn is_marked(&self, item: &Self::Item) -> bool;
}

/// `N` indices with an explicit marked set.
#[derive(Debug, Clone)]
pub struct IndexSpace {
    size: u64,
    query_cost: u64,
    marked: Vec<u64>,
}

impl IndexSpace {
    pub fn new(size: u64, query_cost: u64, mut marked: Vec<u64>) -> Self {
        marked.sort_unstable();
        marked.dedup();
        assert!(
            marked.iter().all(|&i| i < size),
            "marked index outside the space"
        );
        IndexSpace {
            size,
            query_cost,
            marked,
        }
    }

    /// The first `m` indices are marked.
    pub fn with_prefix_marked(size: u64, query_cost: u64, m: u64) -> Self {
        Self::new(size, query_cost, (0..m).collect())
    }
}

impl SearchSpace for IndexSpace {
    type Item = u64;

    fn size(&self) -> u64 {
        self.size
    }

    fn query_cost(&self) -> u64 {
        self.query_cost
    }

    fn marked_count(&self) -> u64 {
        self.marked.len() as u64
    }

    fn marked_item(&self, rank: u64) -> u64 {
        self.marked[rank as usize]
    }

    fn is_marked(&self, item: &u64) -> bool {
        self.marked.binary_search(item).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverOutcome<T> {
    pub found: Option<T>,
    /// Grover iterations applied, summed over attempts.
    pub iterations_used: u64,
    pub attempts: u32,
    /// Queries billed, including one item test per measurement.
    pub queries: u64,
}

impl<T> GroverOutcome<T> {
    fn nothing() -> Self {
        GroverOutcome {
            found: None,
            iterations_used: 0,
            attempts: 0,
            queries: 0,
        }
    }
}

/// `⌈(π/4)·√N⌉`, the largest iteration range any attempt may draw from.
pub fn iteration_cap(size: u64) -> u64 {
    ((PI / 4.0) * (size as f64).sqrt()).ceil().max(1.0) as u64
}

/// Rotation angle `θ` with `sin²θ = m/N`.
pub fn rotation_angle(size: u64, marked: u64) -> f64 {
    if size == 0 {
        return 0.0;
    }
    (marked as f64 / size as f64).sqrt().min(1.0).asin()
}

/// Probability that measuring after `k` Grover iterations yields a marked item.
pub fn grover_success_prob(size: u64, marked: u64, iterations: u64) -> f64 {
    if marked == 0 || size == 0 {
        return 0.0;
    }
    let theta = rotation_angle(size, marked);
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Success of one attempt with `k` drawn uniformly from `[0, range)`.
pub fn mean_success_prob(size: u64, marked: u64, range: u64) -> f64 {
    if range == 0 {
        return 0.0;
    }
    (0..range)
        .map(|k| grover_success_prob(size, marked, k))
        .sum::<f64>()
        / range as f64
}

/// Iteration ranges `min(⌈λ^j⌉, cap)` of the growing schedule, ending after
/// [`SATURATED_ATTEMPTS`] attempts at the cap.
pub fn growing_schedule(size: u64) -> Vec<u64> {
    let cap = iteration_cap(size);
    let mut out = Vec::new();
    let mut level = 1.0f64;
    let mut saturated = 0;
    while saturated < SATURATED_ATTEMPTS {
        let range = (level.ceil() as u64).min(cap);
        if range == cap {
            saturated += 1;
        }
        out.push(range);
        level *= SCHEDULE_GROWTH;
    }
    out
}

/// Analytic success probability of [`grover_search`].
pub fn schedule_success_prob(size: u64, marked: u64) -> f64 {
    let miss: f64 = growing_schedule(size)
        .into_iter()
        .map(|r| 1.0 - mean_success_prob(size, marked, r))
        .product();
    1.0 - miss
}

/// Analytic expected query cost of [`grover_search`] in units of `q_test`.
pub fn schedule_expected_cost(size: u64, marked: u64) -> f64 {
    let mut survive = 1.0;
    let mut cost = 0.0;
    for r in growing_schedule(size) {
        // k uniform on [0, r): mean k + 1 item test.
        cost += survive * ((r - 1) as f64 / 2.0 + 1.0);
        survive *= 1.0 - mean_success_prob(size, marked, r);
    }
    cost
}

/// One measurement after `k ~ U[0, range)` iterations. Bills `k·q + q`.
fn attempt<S, R>(
    space: &S,
    range: u64,
    ledger: &mut QueryLedger,
    tag: StepTag,
    rng: &mut R,
) -> Result<(Option<S::Item>, u64), OracleError>
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    let k = rng.gen_range(0..range.max(1));
    let q = space.query_cost();
    ledger.charge(k * q + q, tag)?;
    let m = space.marked_count();
    let p = grover_success_prob(space.size(), m, k);
    let found = if m > 0 && rng.gen::<f64>() < p {
        let item = space.marked_item(rng.gen_range(0..m));
        debug_assert!(space.is_marked(&item));
        Some(item)
    } else {
        None
    };
    Ok((found, k))
}

/// Grover search for an unknown number of marked items.
///
/// Attempt `j` draws `k` uniformly from `[0, min(⌈λ^j⌉, cap))`; the search
/// stops at the first verified find or after the schedule is exhausted.
pub fn grover_search<S, R>(
    space: &S,
    ledger: &mut QueryLedger,
    tag: StepTag,
    rng: &mut R,
) -> Result<GroverOutcome<S::Item>, OracleError>
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    let mut out = GroverOutcome::nothing();
    if space.size() == 0 {
        return Ok(out);
    }
    let before = ledger.total();
    for range in growing_schedule(space.size()) {
        let (found, k) = attempt(space, range, ledger, tag, rng)?;
        out.iterations_used += k;
        out.attempts += 1;
        if found.is_some() {
            out.found = found;
            break;
        }
    }
    out.queries = ledger.total() - before;
    Ok(out)
}

/// Number of independent repetitions Safe Grover makes: `max(1, ⌈c·log₂N⌉)`.
pub fn safe_grover_rounds(size: u64, c: f64) -> u64 {
    if size <= 1 {
        return 1;
    }
    ((c * (size as f64).log2()).ceil() as u64).max(1)
}

/// Worst-case cost of Safe Grover in units of `q_test`.
pub fn safe_grover_cost_cap(size: u64, c: f64) -> u64 {
    safe_grover_rounds(size, c) * iteration_cap(size)
}

/// Analytic failure probability of [`safe_grover`] when `marked ≥ 1` items exist.
pub fn safe_grover_failure_prob(size: u64, marked: u64, c: f64) -> f64 {
    let per_round = 1.0 - mean_success_prob(size, marked, iteration_cap(size));
    per_round.powi(safe_grover_rounds(size, c) as i32)
}

/// Safe Grover: `⌈c·log₂N⌉` independent attempts at the saturated level, each
/// drawing `k ~ U[0, ⌈(π/4)√N⌉)`, so every attempt costs at most `cap·q_test`.
pub fn safe_grover<S, R>(
    space: &S,
    c: f64,
    ledger: &mut QueryLedger,
    tag: StepTag,
    rng: &mut R,
) -> Result<GroverOutcome<S::Item>, OracleError>
where
    S: SearchSpace + ?Sized,
    R: Rng + ?Sized,
{
    let mut out = GroverOutcome::nothing();
    if space.size() == 0 {
        return Ok(out);
    }
    let before = ledger.total();
    let cap = iteration_cap(space.size());
    for _ in 0..safe_grover_rounds(space.size(), c) {
        let (found, k) = attempt(space, cap, ledger, tag, rng)?;
        out.iterations_used += k;
        out.attempts += 1;
        if found.is_some() {
            out.found = found;
            break;
        }
    }
    out.queries = ledger.total() - before;
    Ok(out)
}

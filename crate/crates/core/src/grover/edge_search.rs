//! Search for a triangle having at least one edge in a known pair set `E`.
//!
//! The base procedure `A` Grover-searches `E` for a pair that is an edge of
//! `G`, then Grover-searches `[n]` for an apex adjacent to both endpoints.
//! Amplitude amplification over `A` uses an approximate count of `|G∩E|` to
//! size the inner search and the outer schedule.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::{counting::estimate_marked, iteration_cap, rotation_angle, SCHEDULE_GROWTH};
use crate::graph::{EdgeSet, Pair, Triangle};
use crate::oracle::{OracleError, QueryOracle, StepTag};

/// Constant of the cost contract `C·(√|E| + √(n·max(1, |G∩E|)))·ln n`.
pub const EDGE_SEARCH_COST_CONSTANT: f64 = 128.0;

/// Extra saturated outer rounds beyond `⌈ln n⌉`.
const EXTRA_SATURATED_ROUNDS: u32 = 3;

pub fn edge_search_cost_cap(n: u32, e_size: usize, good: u64) -> f64 {
    let n = f64::from(n.max(2));
    EDGE_SEARCH_COST_CONSTANT * ((e_size as f64).sqrt() + (n * good.max(1) as f64).sqrt()) * n.ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSearchOutcome {
    pub found: Option<Triangle>,
    /// Approximate count of `|G∩E|` used to tune the search.
    pub estimated_good: u64,
    pub attempts: u32,
    pub queries: u64,
}

/// Pairs of `E` that are edges of `G`, grouped by their number of common neighbours.
struct GoodEdges {
    total: u64,
    by_apexes: BTreeMap<u64, Vec<Pair>>,
}

impl GoodEdges {
    fn new(e: &EdgeSet, oracle: &QueryOracle<'_>) -> Self {
        let g = oracle.simulator_view();
        let mut by_apexes: BTreeMap<u64, Vec<Pair>> = BTreeMap::new();
        let mut total = 0;
        for p in e.iter().filter(|&p| g.has_edge(p)) {
            total += 1;
            let t = g.common_neighbors(p);
            if t > 0 {
                by_apexes.entry(t).or_default().push(p);
            }
        }
        GoodEdges { total, by_apexes }
    }

    /// Per-group weights `|group|·sin²((2k₂+1)θ_t)` of a measured triangle.
    fn weights(&self, n: u32, k2: u64) -> Vec<(u64, f64)> {
        self.by_apexes
            .iter()
            .map(|(&t, pairs)| {
                let theta = rotation_angle(u64::from(n), t);
                (
                    t,
                    pairs.len() as f64 * ((2 * k2 + 1) as f64 * theta).sin().powi(2),
                )
            })
            .collect()
    }
}

/// Looks for a triangle of `G` with an edge in `E`. A returned triangle has
/// already been verified by three classical queries under [`StepTag::Verify`].
pub fn edge_restricted_triangle_search<R: Rng + ?Sized>(
    e: &EdgeSet,
    oracle: &mut QueryOracle<'_>,
    tag: StepTag,
    rng: &mut R,
) -> Result<EdgeSearchOutcome, OracleError> {
    let mut out = EdgeSearchOutcome {
        found: None,
        estimated_good: 0,
        attempts: 0,
        queries: 0,
    };
    if e.is_empty() {
        return Ok(out);
    }
    let before = oracle.ledger().total();
    let n = oracle.n();
    let size = e.len() as u64;
    let good = GoodEdges::new(e, oracle);

    let est = estimate_marked(size, good.total, 1, oracle.ledger_mut(), tag, rng)?;
    out.estimated_good = est;
    if est == 0 {
        out.queries = oracle.ledger().total() - before;
        return Ok(out);
    }

    let inner_cap = ((PI / 4.0) * (size as f64 / est as f64).sqrt()).ceil() as u64 + 1;
    let apex_cap = iteration_cap(u64::from(n));
    let outer_cap = (PI * (est as f64).sqrt()).ceil() as u64;
    let saturated_rounds = (f64::from(n.max(2)).ln().ceil() as u32) + EXTRA_SATURATED_ROUNDS;
    let theta1 = rotation_angle(size, good.total);

    let mut level = 1.0f64;
    let mut saturated = 0;
    while saturated < saturated_rounds {
        let range = (level.ceil() as u64).min(outer_cap);
        if range == outer_cap {
            saturated += 1;
        }
        level *= SCHEDULE_GROWTH;

        let j = rng.gen_range(0..range);
        let k1 = rng.gen_range(0..inner_cap);
        let k2 = rng.gen_range(0..apex_cap);
        // One pass of A costs k1 inner and k2 apex iterations (two queries each);
        // each amplification round runs A twice plus a 3-query marking check,
        // and the measured candidate is checked with 3 more.
        oracle.charge((2 * j + 1) * (k1 + 2 * k2) + 3 * j + 3, tag)?;
        out.attempts += 1;

        let weights = good.weights(n, k2);
        let apex_mass: f64 = weights.iter().map(|(_, w)| w).sum();
        if good.total == 0 || apex_mass == 0.0 {
            continue;
        }
        let s1 = ((2 * k1 + 1) as f64 * theta1).sin().powi(2);
        let p_a = s1 * apex_mass / good.total as f64;
        let p = ((2 * j + 1) as f64 * p_a.sqrt().min(1.0).asin())
            .sin()
            .powi(2);
        if rng.gen::<f64>() >= p {
            continue;
        }

        let mut u = rng.gen::<f64>() * apex_mass;
        let (t, pairs) = weights
            .iter()
            .find(|(_, w)| {
                let hit = u < *w;
                u -= w;
                hit
            })
            .map(|&(t, _)| (t, &good.by_apexes[&t]))
            .unwrap_or_else(|| {
                let (t, pairs) = good
                    .by_apexes
                    .iter()
                    .next_back()
                    .expect("nonzero apex mass");
                (*t, pairs)
            });
        let pair = pairs[rng.gen_range(0..pairs.len())];
        let apex = oracle
            .simulator_view()
            .nth_common_neighbor(pair, rng.gen_range(0..t))
            .expect("apex rank within the common neighbourhood");
        let tri =
            Triangle::new(pair.lo(), pair.hi(), apex).expect("apex is distinct from the pair");
        if oracle.verify(&tri)? {
            out.found = Some(tri);
            break;
        }
    }
    out.queries = oracle.ledger().total() - before;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Graph, GraphKind};
    use crate::rng::substream;

    #[test]
    fn empty_set_costs_nothing() {
        let g = Graph::complete(5).unwrap();
        let mut o = QueryOracle::with_budget(&g, None);
        let out = edge_restricted_triangle_search(
            &EdgeSet::new(),
            &mut o,
            StepTag::Step10,
            &mut substream(0, "e", 0),
        )
        .unwrap();
        assert!(out.found.is_none());
        assert_eq!(o.report().total, 0);
    }

    #[test]
    fn k3_with_one_known_edge() {
        let g = Graph::complete(3).unwrap();
        let e: EdgeSet = [Pair::new(1, 2)].into_iter().collect();
        let mut hits = 0;
        for seed in 0..300 {
            let mut o = QueryOracle::with_budget(&g, None);
            let out = edge_restricted_triangle_search(
                &e,
                &mut o,
                StepTag::Step10,
                &mut substream(seed, "k3", 0),
            )
            .unwrap();
            if let Some(t) = out.found {
                assert_eq!(t.vertices(), [1, 2, 3]);
                hits += 1;
            }
        }
        assert!(hits * 3 >= 300 * 2, "{hits}/300");
    }

    #[test]
    fn bipartite_graph_never_yields_a_triangle() {
        let g = generate(GraphKind::BipartiteBlowup, 8, 0).unwrap();
        let e = EdgeSet::all_pairs(8);
        for seed in 0..100 {
            let mut o = QueryOracle::with_budget(&g, None);
            let out = edge_restricted_triangle_search(
                &e,
                &mut o,
                StepTag::Step10,
                &mut substream(seed, "b", 0),
            )
            .unwrap();
            assert!(out.found.is_none());
            assert_eq!(o.ledger().step(StepTag::Verify), 0);
        }
    }

    #[test]
    fn planted_triangle_through_known_edge() {
        let n = 64;
        let mut hits = 0;
        for seed in 0..200 {
            let g = generate(GraphKind::PlantedTriangle { p: 0.5 }, n, seed).unwrap();
            let tri = g
                .enumerate_triangles()
                .into_iter()
                .next()
                .expect("planted triangle");
            // Only one edge of the known set carries a triangle.
            let mut e: EdgeSet = EdgeSet::all_pairs(n)
                .iter()
                .filter(|&p| !g.has_edge(p))
                .take(500)
                .collect();
            e.insert(tri.pairs()[0]);
            let mut o = QueryOracle::with_budget(&g, None);
            let out = edge_restricted_triangle_search(
                &e,
                &mut o,
                StepTag::Step10,
                &mut substream(seed, "p", 0),
            )
            .unwrap();
            if let Some(t) = out.found {
                assert!(t.pairs().iter().all(|&p| g.has_edge(p)));
                hits += 1;
            }
        }
        assert!(hits * 3 >= 200 * 2, "{hits}/200");
    }
}

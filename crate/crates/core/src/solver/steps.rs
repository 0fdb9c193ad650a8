//! The individual rows of the detection algorithm.

use rand::seq::index::sample;
use rand::Rng;

use super::candidate::CandidateGraph;
use super::spaces::{PairSquareSpace, TriangleSpace};
use super::Params;
use crate::graph::{EdgeSet, Pair, Triangle, Vertex};
use crate::grover::{edge_restricted_triangle_search, safe_grover, SearchSpace};
use crate::oracle::{OracleError, QueryOracle, StepTag};

/// Sampled vertices and their neighbourhoods, as learned in Step 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub vertices: Vec<Vertex>,
    pub neighborhoods: Vec<Vec<Vertex>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    Low,
    High,
}

/// Result of a Safe Grover call: the verified find, and whether a marked
/// item existed but was missed (a simulator-side diagnostic).
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub triangle: Option<Triangle>,
    pub missed: bool,
}

#[derive(Debug)]
pub enum Step2Outcome {
    Triangle(Triangle),
    Candidates {
        gprime: CandidateGraph,
        misses: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step7Outcome {
    pub triangle: Option<Triangle>,
    pub missed: bool,
    /// Pairs moved from `G′` to `E`.
    pub moved: usize,
}

/// Step 1: `k = min(n, ⌈4n^ε ln n⌉)` distinct random vertices, each with all
/// `n−1` incident pairs queried.
pub fn step1_sample<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    params: &Params,
    rng: &mut R,
) -> Result<Sample, OracleError> {
    let n = oracle.n();
    let k = params.sample_size(n);
    let mut vertices: Vec<Vertex> = sample(rng, n as usize, k)
        .iter()
        .map(|i| i as Vertex + 1)
        .collect();
    vertices.sort_unstable();
    let mut neighborhoods = Vec::with_capacity(k);
    for &v in &vertices {
        let mut nb = Vec::new();
        for u in (1..=n).filter(|&u| u != v) {
            if oracle.query(v, u, StepTag::Step1)? {
                nb.push(u);
            }
        }
        neighborhoods.push(nb);
    }
    Ok(Sample {
        vertices,
        neighborhoods,
    })
}

/// Step 2: Safe Grover for an edge inside each sampled neighbourhood; on a
/// hit, the verified triangle through the sampled vertex. Otherwise `G′` is
/// every pair not inside a sampled neighbourhood.
pub fn step2_build_gprime<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    sample: &Sample,
    params: &Params,
    rng: &mut R,
) -> Result<Step2Outcome, OracleError> {
    let graph = oracle.simulator_view();
    let mut misses = 0;
    for (&vi, nb) in sample.vertices.iter().zip(&sample.neighborhoods) {
        let space = PairSquareSpace::new(graph, nb);
        let out = safe_grover(
            &space,
            params.c_safe,
            oracle.ledger_mut(),
            StepTag::Step2,
            rng,
        )?;
        match out.found {
            Some(p) => {
                let tri = Triangle::new(vi, p.lo(), p.hi())
                    .expect("pair lies in the neighbourhood of vi");
                if oracle.verify(&tri)? {
                    return Ok(Step2Outcome::Triangle(tri));
                }
            }
            None if space.marked_count() > 0 => misses += 1,
            None => {}
        }
    }
    let gprime = CandidateGraph::complement_of_squares(
        oracle.n(),
        &sample.neighborhoods,
        params.tau(oracle.n()),
    );
    Ok(Step2Outcome::Candidates { gprime, misses })
}

/// Step 4: peel every pair with `t(G′,·,·) < τ` into `T`. No queries.
pub fn step4_peel(gprime: &mut CandidateGraph, t: &mut EdgeSet) -> usize {
    let moved = gprime.peel();
    let count = moved.len();
    t.extend(moved.iter());
    count
}

/// Step 5: `K = ⌈c₀ ln n⌉` rounds of `⌈n^δ⌉` random probes `(v, x)`; Low if
/// fewer than `K/2` rounds saw an edge.
pub fn step5_degree_hypothesis<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    v: Vertex,
    params: &Params,
    rng: &mut R,
) -> Result<Hypothesis, OracleError> {
    let n = oracle.n();
    let rounds = params.rounds(n);
    let per_round = params.probes_per_round(n);
    let mut hits = 0u64;
    for _ in 0..rounds {
        let mut hit = false;
        for _ in 0..per_round {
            let mut x = rng.gen_range(1..n);
            if x >= v {
                x += 1;
            }
            hit |= oracle.query(v, x, StepTag::Step5)?;
        }
        hits += u64::from(hit);
    }
    Ok(if 2 * hits < rounds {
        Hypothesis::Low
    } else {
        Hypothesis::High
    })
}

/// Step 6: move every `G′` pair at `v` into `E`. No queries.
pub fn step6_low_degree(gprime: &mut CandidateGraph, e: &mut EdgeSet, v: Vertex) -> usize {
    let moved = gprime.remove_incident(v);
    let count = moved.len();
    e.extend(moved.iter());
    count
}

/// Step 7: learn `A = ν_G(v)` with `n−1` queries, Safe Grover inside `A²`,
/// and failing that move `G′(A, A′)` into `E` with `A′ = ν_{G′}(v)`.
pub fn step7_high_degree<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    gprime: &mut CandidateGraph,
    e: &mut EdgeSet,
    v: Vertex,
    params: &Params,
    rng: &mut R,
) -> Result<Step7Outcome, OracleError> {
    let n = oracle.n();
    let mut a = Vec::new();
    for u in (1..=n).filter(|&u| u != v) {
        if oracle.query(v, u, StepTag::Step7)? {
            a.push(u);
        }
    }
    let space = PairSquareSpace::new(oracle.simulator_view(), &a);
    let out = safe_grover(
        &space,
        params.c_safe,
        oracle.ledger_mut(),
        StepTag::Step7,
        rng,
    )?;
    if let Some(p) = out.found {
        let tri = Triangle::new(v, p.lo(), p.hi()).expect("pair lies in the neighbourhood of v");
        if oracle.verify(&tri)? {
            return Ok(Step7Outcome {
                triangle: Some(tri),
                missed: false,
                moved: 0,
            });
        }
    }
    let a_prime = gprime.neighbors(v);
    let moved = gprime.bipartite_pairs(&a, &a_prime);
    for p in moved.iter() {
        gprime.remove(p);
    }
    e.extend(moved.iter());
    Ok(Step7Outcome {
        triangle: None,
        missed: space.marked_count() > 0,
        moved: moved.len(),
    })
}

/// Step 9: Safe Grover over the triangles of the known pair set `T`.
pub fn step9_search_t<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    t: &EdgeSet,
    params: &Params,
    rng: &mut R,
) -> Result<SearchResult, OracleError> {
    let space = TriangleSpace::new(oracle.simulator_view(), t);
    let out = safe_grover(
        &space,
        params.c_safe,
        oracle.ledger_mut(),
        StepTag::Step9,
        rng,
    )?;
    if let Some(tri) = out.found {
        if oracle.verify(&tri)? {
            return Ok(SearchResult {
                triangle: Some(tri),
                missed: false,
            });
        }
    }
    Ok(SearchResult {
        triangle: None,
        missed: space.marked_count() > 0,
    })
}

/// Step 10: search for a triangle with an edge in `E`.
pub fn step10_search_e<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    e: &EdgeSet,
    rng: &mut R,
) -> Result<Option<Triangle>, OracleError> {
    Ok(edge_restricted_triangle_search(e, oracle, StepTag::Step10, rng)?.found)
}

/// Pairs of `E` that are edges of the hidden graph (diagnostic).
pub(crate) fn g_cap(oracle: &QueryOracle<'_>, set: &EdgeSet) -> usize {
    let g = oracle.simulator_view();
    set.iter().filter(|&p: &Pair| g.has_edge(p)).count()
}

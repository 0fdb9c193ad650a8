//! The sampling, peeling and classification algorithm for triangle detection.
//!
//! [`solve`] runs the ten rows end to end against a [`QueryOracle`]. Every
//! decision is taken from queried data or from the classically known sets
//! `G′`, `T` and `E`; the hidden graph is read directly only to sample the
//! outcomes of modeled quantum searches and to fill the diagnostic fields
//! of the report.

mod candidate;
mod spaces;
mod steps;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeSet, Triangle, Vertex};
use crate::oracle::{LedgerReport, OracleError, QueryOracle};
use crate::rng::substream;

pub use candidate::CandidateGraph;
pub use spaces::{AllTriplesSpace, PairSquareSpace, TriangleSpace};
pub use steps::{
    step10_search_e, step1_sample, step2_build_gprime, step4_peel, step5_degree_hypothesis,
    step6_low_degree, step7_high_degree, step9_search_t, Hypothesis, Sample, SearchResult,
    Step2Outcome, Step7Outcome,
};

/// Smallest graph the solver accepts.
pub const MIN_VERTICES: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub epsilon: f64,
    pub epsilon_prime: f64,
    pub delta: f64,
    /// Safe Grover repetition constant.
    pub c_safe: f64,
    /// Step 5 repetition constant.
    pub c0: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            epsilon: 3.0 / 7.0,
            epsilon_prime: 1.0 / 7.0,
            delta: 1.0 / 7.0,
            c_safe: 2.0,
            c0: 14.0,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<(), SolveError> {
        let unit = |name: &str, x: f64| {
            if x > 0.0 && x < 1.0 {
                Ok(())
            } else {
                Err(SolveError::InvalidParams(format!(
                    "{name} must lie in (0, 1), got {x}"
                )))
            }
        };
        unit("epsilon", self.epsilon)?;
        unit("epsilon_prime", self.epsilon_prime)?;
        unit("delta", self.delta)?;
        if !(self.c_safe >= 1.0) || !(self.c0 >= 1.0) {
            return Err(SolveError::InvalidParams(format!(
                "c_safe and c0 must be at least 1, got {} and {}",
                self.c_safe, self.c0
            )));
        }
        Ok(())
    }

    /// `k = min(n, ⌈4·n^ε·ln n⌉)`.
    pub fn sample_size(&self, n: u32) -> usize {
        let nf = f64::from(n);
        ((4.0 * nf.powf(self.epsilon) * nf.ln()).ceil() as usize).min(n as usize)
    }

    /// Peel threshold `τ = ⌈n^{1−ε′}⌉`.
    pub fn tau(&self, n: u32) -> u64 {
        f64::from(n).powf(1.0 - self.epsilon_prime).ceil() as u64
    }

    /// Step 5 rounds `K = ⌈c₀·ln n⌉`.
    pub fn rounds(&self, n: u32) -> u64 {
        (self.c0 * f64::from(n).ln()).ceil() as u64
    }

    /// Step 5 probes per round, `⌈n^δ⌉`.
    pub fn probes_per_round(&self, n: u32) -> u64 {
        f64::from(n).powf(self.delta).ceil() as u64
    }

    /// Degree unit `⌈n^{1−δ}⌉` of the two hypotheses.
    pub fn degree_unit(&self, n: u32) -> u64 {
        f64::from(n).powf(1.0 - self.delta).ceil() as u64
    }

    /// `n^{1−ε}`: with high probability no pair of `G′` has more common neighbours in `G`.
    pub fn gprime_threshold(&self, n: u32) -> f64 {
        f64::from(n).powf(1.0 - self.epsilon)
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("graph has {n} vertices; the solver needs at least {min}")]
    TooSmall { n: u32, min: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Outcome {
    Triangle { vertices: [Vertex; 3] },
    No,
}

impl Outcome {
    pub fn triangle(&self) -> Option<Triangle> {
        match self {
            Outcome::Triangle {
                vertices: [a, b, c],
            } => Triangle::new(*a, *b, *c),
            Outcome::No => None,
        }
    }
}

/// Structural diagnostics observed with simulator privilege.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Some pair of `G′` has more than `n^{1−ε}` common neighbours in `G`.
    GprimeViolation { pairs: usize },
    /// The Step 5 verdict contradicts the true degree outside the gap.
    HypothesisMismatch {
        vertex: Vertex,
        hypothesis: String,
        degree: u64,
    },
    /// A Safe Grover call returned nothing although a marked item existed.
    SafeGroverMiss { step: String },
    /// Step 7 would move no pair; the vertex was handled as in Step 6.
    Step7NoProgress { vertex: Vertex },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measured {
    pub sample_size: usize,
    pub gprime_size: Option<usize>,
    #[serde(rename = "T_size")]
    pub t_size: Option<usize>,
    #[serde(rename = "E_size")]
    pub e_size: Option<usize>,
    #[serde(rename = "G_cap_E")]
    pub g_cap_e: Option<usize>,
    pub t_of_t: Option<u64>,
    pub step5_calls: u64,
    pub step6_calls: u64,
    pub step7_calls: u64,
    /// Whether every `G′` pair ended up in `T ∪ E`.
    pub covered: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub n: u32,
    pub seed: u64,
    pub params: Params,
    pub outcome: Outcome,
    pub cost: LedgerReport,
    pub events: Vec<Event>,
    pub measured: Measured,
}

impl RunReport {
    pub fn has_event(&self, pred: impl Fn(&Event) -> bool) -> bool {
        self.events.iter().any(pred)
    }
}

/// Runs the full algorithm. All randomness comes from named substreams of `seed`.
pub fn solve(
    oracle: &mut QueryOracle<'_>,
    params: &Params,
    seed: u64,
) -> Result<RunReport, SolveError> {
    params.validate()?;
    let n = oracle.n();
    if n < MIN_VERTICES {
        return Err(SolveError::TooSmall {
            n,
            min: MIN_VERTICES,
        });
    }
    let mut events = Vec::new();
    let mut measured = Measured::default();
    let finish = |oracle: &QueryOracle<'_>, outcome, events, measured| RunReport {
        n,
        seed,
        params: *params,
        outcome,
        cost: oracle.report(),
        events,
        measured,
    };
    let found = |t: Triangle| Outcome::Triangle {
        vertices: t.vertices(),
    };

    let sample = step1_sample(oracle, params, &mut substream(seed, "step1", 0))?;
    measured.sample_size = sample.vertices.len();

    let (mut gprime, misses) =
        match step2_build_gprime(oracle, &sample, params, &mut substream(seed, "step2", 0))? {
            Step2Outcome::Triangle(t) => return Ok(finish(oracle, found(t), events, measured)),
            Step2Outcome::Candidates { gprime, misses } => (gprime, misses),
        };
    for _ in 0..misses {
        events.push(Event::SafeGroverMiss {
            step: "step2".into(),
        });
    }
    let built = gprime.pairs();
    measured.gprime_size = Some(built.len());
    let graph = oracle.simulator_view();
    let threshold = params.gprime_threshold(n);
    let violating = built
        .iter()
        .filter(|&p| graph.common_neighbors(p) as f64 > threshold)
        .count();
    if violating > 0 {
        events.push(Event::GprimeViolation { pairs: violating });
    }

    // Step 3.
    let mut t = EdgeSet::new();
    let mut e = EdgeSet::new();

    let unit = params.degree_unit(n);
    loop {
        step4_peel(&mut gprime, &mut t);
        let Some(v) = gprime.first_active_vertex() else {
            break;
        };
        let call = measured.step5_calls;
        measured.step5_calls += 1;
        let hyp = step5_degree_hypothesis(oracle, v, params, &mut substream(seed, "step5", call))?;
        let degree = graph.degree(v).expect("active vertex is in range");
        let mismatch = match hyp {
            Hypothesis::Low => degree > 10 * unit,
            Hypothesis::High => (degree as f64) < 0.1 * unit as f64,
        };
        if mismatch {
            events.push(Event::HypothesisMismatch {
                vertex: v,
                hypothesis: format!("{hyp:?}").to_lowercase(),
                degree,
            });
        }
        match hyp {
            Hypothesis::Low => {
                measured.step6_calls += 1;
                step6_low_degree(&mut gprime, &mut e, v);
            }
            Hypothesis::High => {
                let idx = measured.step7_calls;
                measured.step7_calls += 1;
                let out = step7_high_degree(
                    oracle,
                    &mut gprime,
                    &mut e,
                    v,
                    params,
                    &mut substream(seed, "step7", idx),
                )?;
                if let Some(tri) = out.triangle {
                    return Ok(finish(oracle, found(tri), events, measured));
                }
                if out.missed {
                    events.push(Event::SafeGroverMiss {
                        step: "step7".into(),
                    });
                }
                if out.moved == 0 {
                    events.push(Event::Step7NoProgress { vertex: v });
                    step6_low_degree(&mut gprime, &mut e, v);
                }
            }
        }
    }

    measured.t_size = Some(t.len());
    measured.e_size = Some(e.len());
    measured.g_cap_e = Some(steps::g_cap(oracle, &e));
    measured.t_of_t = Some(t.to_graph(n).expect("pairs over [n]").triangle_count());
    measured.covered =
        Some(built.iter().all(|p| t.contains(p) || e.contains(p)) && t.is_disjoint(&e));

    let s9 = step9_search_t(oracle, &t, params, &mut substream(seed, "step9", 0))?;
    if let Some(tri) = s9.triangle {
        return Ok(finish(oracle, found(tri), events, measured));
    }
    if s9.missed {
        events.push(Event::SafeGroverMiss {
            step: "step9".into(),
        });
    }

    let outcome = match step10_search_e(oracle, &e, &mut substream(seed, "step10", 0))? {
        Some(tri) => found(tri),
        None => Outcome::No,
    };
    Ok(finish(oracle, outcome, events, measured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Graph, GraphKind, Pair};
    use crate::oracle::StepTag;

    #[test]
    fn derived_sizes() {
        let p = Params::default();
        assert_eq!(p.sample_size(1024), 541);
        assert_eq!(p.sample_size(16), 16);
        assert_eq!(p.tau(8), 6);
        assert_eq!(p.rounds(64), 59);
        assert_eq!(p.probes_per_round(64), 2);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Graph::complete(7).unwrap();
        let mut o = QueryOracle::new(&g);
        assert!(matches!(
            solve(&mut o, &Params::default(), 0),
            Err(SolveError::TooSmall { .. })
        ));
        let g = Graph::complete(8).unwrap();
        let mut o = QueryOracle::new(&g);
        let bad = Params {
            delta: 1.5,
            ..Params::default()
        };
        assert!(matches!(
            solve(&mut o, &bad, 0),
            Err(SolveError::InvalidParams(_))
        ));
    }

    #[test]
    fn step1_bills_k_times_n_minus_one() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.5 }, 64, 1).unwrap();
        let mut o = QueryOracle::new(&g);
        let s = step1_sample(&mut o, &Params::default(), &mut substream(0, "s", 0)).unwrap();
        let k = Params::default().sample_size(64);
        assert_eq!(s.vertices.len(), k);
        assert_eq!(o.ledger().step(StepTag::Step1), (k * 63) as u64);
        for (v, nb) in s.vertices.iter().zip(&s.neighborhoods) {
            assert_eq!(nb, &g.neighborhood(*v).unwrap());
        }
    }

    #[test]
    fn step5_extremes_and_billing() {
        let p = Params::default();
        let n = 64;
        let empty = Graph::empty(n).unwrap();
        let full = Graph::complete(n).unwrap();
        let per_call = p.rounds(n) * p.probes_per_round(n);
        for seed in 0..50 {
            let mut o = QueryOracle::new(&empty);
            assert_eq!(
                step5_degree_hypothesis(&mut o, 5, &p, &mut substream(seed, "h", 0)).unwrap(),
                Hypothesis::Low
            );
            assert_eq!(o.ledger().step(StepTag::Step5), per_call);
            let mut o = QueryOracle::new(&full);
            assert_eq!(
                step5_degree_hypothesis(&mut o, 5, &p, &mut substream(seed, "h", 1)).unwrap(),
                Hypothesis::High
            );
        }
    }

    #[test]
    fn step7_moves_the_bipartite_pairs() {
        // K_{8,8} on 16 vertices with G′ = all pairs: A = {9..16}, A′ = [16]∖{1}.
        let g = generate(GraphKind::BipartiteBlowup, 16, 0).unwrap();
        let p = Params::default();
        let mut gp = CandidateGraph::complement_of_squares(16, &[], p.tau(16));
        let mut e = EdgeSet::new();
        let mut o = QueryOracle::new(&g);
        let out =
            step7_high_degree(&mut o, &mut gp, &mut e, 1, &p, &mut substream(0, "s7", 0)).unwrap();
        assert!(out.triangle.is_none());
        assert_eq!(out.moved, 28 + 8 * 7);
        assert!(out.moved as f64 >= 8.0 * 16f64.powf(6.0 / 7.0) / 2.0);
        assert!(e.contains(Pair::new(9, 10)));
        assert!(e.contains(Pair::new(2, 9)));
        assert!(!e.contains(Pair::new(2, 3)));
        assert!(
            o.ledger().step(StepTag::Step7)
                <= 15 + crate::grover::safe_grover_cost_cap(28, p.c_safe)
        );
    }

    #[test]
    fn empty_graph_drains_through_step6() {
        let g = Graph::empty(8).unwrap();
        let mut o = QueryOracle::new(&g);
        let r = solve(&mut o, &Params::default(), 3).unwrap();
        assert_eq!(r.outcome, Outcome::No);
        let m = &r.measured;
        assert_eq!(m.t_size.unwrap() + m.e_size.unwrap(), 28);
        assert_eq!(m.covered, Some(true));
        assert!(m.step6_calls >= 1);
        assert_eq!(m.step7_calls, 0);
    }

    #[test]
    fn report_json_shape() {
        let g = generate(GraphKind::PlantedTriangle { p: 0.5 }, 16, 2).unwrap();
        let mut o = QueryOracle::new(&g);
        let r = solve(&mut o, &Params::default(), 9).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "n", "seed", "params", "outcome", "cost", "events", "measured",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["params"]["epsilon_prime"].is_number());
        assert!(v["outcome"]["type"].is_string());
        assert!(v["measured"].get("T_size").is_some());
        assert!(v["measured"].get("G_cap_E").is_some());
        let back: RunReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn replay_is_identical() {
        let g = generate(GraphKind::ErdosRenyi { p: 0.3 }, 40, 5).unwrap();
        let a = solve(&mut QueryOracle::new(&g), &Params::default(), 17).unwrap();
        let b = solve(&mut QueryOracle::new(&g), &Params::default(), 17).unwrap();
        assert_eq!(a, b);
    }
}

//! Reproducible test-instance generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, Vertex};
use crate::rng::substream;

/// Instance families.
///
/// `PlantedTriangle(p)` draws a random bipartite graph between the halves
/// `{1..⌈n/2⌉}` and the rest with edge probability `p`, then adds the three
/// edges of a triangle on random distinct vertices. `TriangleFreeDense` is
/// the balanced blow-up of the 5-cycle (vertex `v` lives in part `(v-1) mod 5`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    ErdosRenyi { p: f64 },
    PlantedTriangle { p: f64 },
    Complete,
    BipartiteBlowup,
    TriangleFreeDense,
}

impl GraphKind {
    pub fn name(&self) -> &'static str {
        match self {
            GraphKind::ErdosRenyi { .. } => "erdos_renyi",
            GraphKind::PlantedTriangle { .. } => "planted_triangle",
            GraphKind::Complete => "complete",
            GraphKind::BipartiteBlowup => "bipartite_blowup",
            GraphKind::TriangleFreeDense => "triangle_free_dense",
        }
    }

    /// Parses a kind name, attaching `p` to the kinds that take one.
    pub fn parse(name: &str, p: Option<f64>) -> Result<Self, String> {
        let need_p = || p.ok_or_else(|| format!("graph kind `{name}` needs an edge probability"));
        Ok(match name {
            "erdos_renyi" | "er" | "gnp" => GraphKind::ErdosRenyi { p: need_p()? },
            "planted_triangle" | "planted" => GraphKind::PlantedTriangle { p: need_p()? },
            "complete" => GraphKind::Complete,
            "bipartite_blowup" | "bipartite" => GraphKind::BipartiteBlowup,
            "triangle_free_dense" | "c5_blowup" => GraphKind::TriangleFreeDense,
            other => return Err(format!("unknown graph kind `{other}`")),
        })
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::ErdosRenyi { p } | GraphKind::PlantedTriangle { p } => {
                write!(f, "{}({p})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('(') {
            Some((name, rest)) => {
                let p = rest
                    .strip_suffix(')')
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| format!("bad probability in `{s}`"))?;
                GraphKind::parse(name, Some(p))
            }
            None => GraphKind::parse(s, None),
        }
    }
}

fn check_p(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::InvalidProbability(p))
    }
}

/// Generates an instance; a pure function of `(kind, n, seed)`.
pub fn generate(kind: GraphKind, n: u32, seed: u64) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::TooSmall { n, min: 3 });
    }
    let mut rng = substream(seed, kind.name(), u64::from(n));
    let mut g = Graph::empty(n)?;
    match kind {
        GraphKind::ErdosRenyi { p } => {
            check_p(p)?;
            for a in 1..=n {
                for b in (a + 1)..=n {
                    if rng.gen_bool(p) {
                        g.add(a, b);
                    }
                }
            }
        }
        GraphKind::PlantedTriangle { p } => {
            check_p(p)?;
            let half = n.div_ceil(2);
            for a in 1..=half {
                for b in (half + 1)..=n {
                    if rng.gen_bool(p) {
                        g.add(a, b);
                    }
                }
            }
            let picked = sample(&mut rng, n as usize, 3);
            let t: Vec<Vertex> = picked.iter().map(|i| i as Vertex + 1).collect();
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                g.add(a, b);
            }
        }
        GraphKind::Complete => return Graph::complete(n),
        GraphKind::BipartiteBlowup => {
            let half = n / 2;
            for a in 1..=half {
                for b in (half + 1)..=n {
                    g.add(a, b);
                }
            }
        }
        GraphKind::TriangleFreeDense => {
            for a in 1..=n {
                for b in (a + 1)..=n {
                    let d = ((b - 1) % 5 + 5 - (a - 1) % 5) % 5;
                    if d == 1 || d == 4 {
                        g.add(a, b);
                    }
                }
            }
        }
    }
    Ok(g)
}

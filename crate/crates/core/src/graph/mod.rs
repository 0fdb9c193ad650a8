//! Exact simple graphs on `[n] = {1, …, n}` backed by packed adjacency rows.
//!
//! Vertices are 1-based throughout the public API. Internally row `v - 1`
//! holds the neighbour bits of vertex `v`, with bit `u - 1` set when `{u, v}`
//! is an edge.

mod generate;
mod io;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;

pub use generate::{generate, GraphKind};

/// A vertex label in `[n]`.
pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} is outside [1, {n}]")]
    VertexOutOfRange { vertex: Vertex, n: u32 },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph must have at least {min} vertices, got {n}")]
    TooSmall { n: u32, min: u32 },
    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An unordered vertex pair stored canonically as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    lo: Vertex,
    hi: Vertex,
}

impl Pair {
    /// Builds the canonical pair. Panics on `a == b`; use [`Pair::try_new`] for input data.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        Self::try_new(a, b).expect("a pair needs two distinct vertices")
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Self, GraphError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Pair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Pair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(GraphError::Loop(a)),
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A finite set of loop-free unordered pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    pairs: BTreeSet<Pair>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the pair was not already present.
    pub fn insert(&mut self, pair: Pair) -> bool {
        self.pairs.insert(pair)
    }

    pub fn remove(&mut self, pair: Pair) -> bool {
        self.pairs.remove(&pair)
    }

    pub fn contains(&self, pair: Pair) -> bool {
        self.pairs.contains(&pair)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Pair> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.pairs.is_disjoint(&other.pairs)
    }

    /// Every unordered pair of `[n]`.
    pub fn all_pairs(n: u32) -> Self {
        (1..=n)
            .flat_map(|a| ((a + 1)..=n).map(move |b| Pair { lo: a, hi: b }))
            .collect()
    }

    /// Interprets the set as a graph on `[n]`.
    pub fn to_graph(&self, n: u32) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n)?;
        for p in self.iter() {
            g.check_vertex(p.hi)?;
            g.add(p.lo, p.hi);
        }
        Ok(g)
    }
}

impl FromIterator<Pair> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Pair>>(iter: I) -> Self {
        EdgeSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl Extend<Pair> for EdgeSet {
    fn extend<I: IntoIterator<Item = Pair>>(&mut self, iter: I) {
        self.pairs.extend(iter)
    }
}

/// Three distinct vertices, stored sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triangle {
    vertices: [Vertex; 3],
}

impl Triangle {
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Option<Self> {
        let mut vertices = [a, b, c];
        vertices.sort_unstable();
        if vertices[0] == vertices[1] || vertices[1] == vertices[2] {
            None
        } else {
            Some(Triangle { vertices })
        }
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.vertices
    }

    pub fn pairs(&self) -> [Pair; 3] {
        let [a, b, c] = self.vertices;
        [
            Pair { lo: a, hi: b },
            Pair { lo: b, hi: c },
            Pair { lo: a, hi: c },
        ]
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

/// A simple undirected graph on `[n]`.
///
/// Immutable once built by a generator, the text loader, or
/// [`EdgeSet::to_graph`]; the only mutation path is crate-internal.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: u32) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::TooSmall { n, min: 1 });
        }
        let words = bits::words_for(n as usize);
        Ok(Graph {
            n,
            words,
            rows: vec![0; words * n as usize],
        })
    }

    /// Builds a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated pairs.
    pub fn from_edges<I>(n: u32, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n)?;
        for (a, b) in edges {
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            let p = Pair::try_new(a, b)?;
            if g.has_edge(p) {
                return Err(GraphError::DuplicateEdge(p.lo, p.hi));
            }
            g.add(p.lo, p.hi);
        }
        Ok(g)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: u32) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for a in 1..=n {
            for b in (a + 1)..=n {
                g.add(a, b);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        bits::count(&self.rows) / 2
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Neighbour row of 1-based vertex `v`; bit `u - 1` marks neighbour `u`.
    #[inline]
    pub(crate) fn row(&self, v: Vertex) -> &[u64] {
        let start = (v as usize - 1) * self.words;
        &self.rows[start..start + self.words]
    }

    pub(crate) fn add(&mut self, a: Vertex, b: Vertex) {
        let w = self.words;
        let (ia, ib) = (a as usize - 1, b as usize - 1);
        bits::set(&mut self.rows[ia * w..(ia + 1) * w], ib);
        bits::set(&mut self.rows[ib * w..(ib + 1) * w], ia);
    }

    /// Adjacency of an already validated pair.
    #[inline]
    pub fn has_edge(&self, p: Pair) -> bool {
        bits::get(self.row(p.lo), p.hi as usize - 1)
    }

    /// Adjacency with range checks; `a == b` is an error since the diagonal is not part of the input.
    pub fn adjacent(&self, a: Vertex, b: Vertex) -> Result<bool, GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        Ok(self.has_edge(Pair::try_new(a, b)?))
    }

    pub fn neighborhood(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check_vertex(v)?;
        Ok(bits::ones(self.row(v)).map(|i| i as Vertex + 1).collect())
    }

    pub fn degree(&self, v: Vertex) -> Result<u64, GraphError> {
        self.check_vertex(v)?;
        Ok(bits::count(self.row(v)))
    }

    /// Number of common neighbours of `a` and `b` (paths of length two).
    pub fn path2_count(&self, a: Vertex, b: Vertex) -> Result<u64, GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        Pair::try_new(a, b)?;
        Ok(bits::and_count(self.row(a), self.row(b)))
    }

    #[inline]
    pub(crate) fn common_neighbors(&self, p: Pair) -> u64 {
        bits::and_count(self.row(p.lo), self.row(p.hi))
    }

    /// The `rank`-th common neighbour of the pair in increasing order.
    pub(crate) fn nth_common_neighbor(&self, p: Pair, rank: u64) -> Option<Vertex> {
        let (ra, rb) = (self.row(p.lo), self.row(p.hi));
        let both: Vec<u64> = ra.iter().zip(rb).map(|(x, y)| x & y).collect();
        let v = bits::ones(&both)
            .nth(rank as usize)
            .map(|i| i as Vertex + 1);
        v
    }

    pub fn edges(&self) -> EdgeSet {
        self.edge_iter().collect()
    }

    pub fn edge_iter(&self) -> impl Iterator<Item = Pair> + '_ {
        (1..=self.n).flat_map(move |a| {
            bits::ones(self.row(a))
                .map(|i| i as Vertex + 1)
                .filter(move |&b| b > a)
                .map(move |b| Pair { lo: a, hi: b })
        })
    }

    /// Exact triangle count.
    pub fn triangle_count(&self) -> u64 {
        self.edge_iter()
            .map(|p| bits::and_count_above(self.row(p.lo), self.row(p.hi), p.hi as usize - 1))
            .sum()
    }

    /// Every triangle exactly once, in lexicographic order.
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        for p in self.edge_iter() {
            let (ra, rb) = (self.row(p.lo), self.row(p.hi));
            for (w, (x, y)) in ra.iter().zip(rb).enumerate() {
                let mut word = x & y;
                while word != 0 {
                    let c = (w * 64 + word.trailing_zeros() as usize) as Vertex + 1;
                    word &= word - 1;
                    if c > p.hi {
                        out.push(Triangle {
                            vertices: [p.lo, p.hi, c],
                        });
                    }
                }
            }
        }
        out
    }

    /// The `rank`-th triangle in the order of [`Graph::enumerate_triangles`],
    /// found without materialising the list.
    pub fn nth_triangle(&self, mut rank: u64) -> Option<Triangle> {
        for p in self.edge_iter() {
            let (ra, rb) = (self.row(p.lo), self.row(p.hi));
            let above = p.hi as usize - 1;
            let here = bits::and_count_above(ra, rb, above);
            if rank < here {
                let c = bits::nth_common_above(ra, rb, above, rank)? as Vertex + 1;
                return Some(Triangle {
                    vertices: [p.lo, p.hi, c],
                });
            }
            rank -= here;
        }
        None
    }

    /// All pairs (edges or not) with at most `t` common neighbours.
    pub fn threshold_graph(&self, t: u64) -> EdgeSet {
        EdgeSet::all_pairs(self.n)
            .iter()
            .filter(|&p| self.common_neighbors(p) <= t)
            .collect()
    }

    /// Edges with one endpoint in `a_side` and the other in `b_side`.
    pub fn bipartite_edges(
        &self,
        a_side: &[Vertex],
        b_side: &[Vertex],
    ) -> Result<EdgeSet, GraphError> {
        let mut b_mask = vec![0u64; self.words];
        for &b in b_side {
            self.check_vertex(b)?;
            bits::set(&mut b_mask, b as usize - 1);
        }
        let mut out = EdgeSet::new();
        for &a in a_side {
            self.check_vertex(a)?;
            for i in bits::ones(self.row(a)) {
                if bits::get(&b_mask, i) {
                    out.insert(Pair::new(a, i as Vertex + 1));
                }
            }
        }
        Ok(out)
    }

    /// Bit mask over `[n]` with the given vertices set.
    pub(crate) fn mask_of(&self, vertices: impl IntoIterator<Item = Vertex>) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for v in vertices {
            bits::set(&mut m, v as usize - 1);
        }
        m
    }

    /// Number of edges with both endpoints in `mask`.
    pub(crate) fn edges_within(&self, mask: &[u64]) -> u64 {
        bits::ones(mask)
            .map(|i| bits::and_count_above(self.row(i as Vertex + 1), mask, i))
            .sum()
    }

    /// The `rank`-th edge inside `mask`, ordered by (lo, hi).
    pub(crate) fn nth_edge_within(&self, mask: &[u64], mut rank: u64) -> Option<Pair> {
        for i in bits::ones(mask) {
            let row = self.row(i as Vertex + 1);
            let here = bits::and_count_above(row, mask, i);
            if rank < here {
                let j = bits::nth_common_above(row, mask, i, rank)?;
                return Some(Pair {
                    lo: i as Vertex + 1,
                    hi: j as Vertex + 1,
                });
            }
            rank -= here;
        }
        None
    }

    /// Edges of `self` that also belong to `other` (same vertex count assumed).
    pub fn intersection(&self, other: &Graph) -> Graph {
        assert_eq!(self.n, other.n, "graphs on different vertex sets");
        Graph {
            n: self.n,
            words: self.words,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
}

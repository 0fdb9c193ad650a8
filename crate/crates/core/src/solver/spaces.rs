//! Search spaces handed to the modeled Grover routines by the solver.

use crate::graph::{EdgeSet, Graph, Pair, Triangle, Vertex};
use crate::grover::SearchSpace;

/// The pairs inside a vertex set `ν`; a pair is marked when it is an edge of `G`.
pub struct PairSquareSpace<'g> {
    graph: &'g Graph,
    mask: Vec<u64>,
    size: u64,
    marked: u64,
}

impl<'g> PairSquareSpace<'g> {
    pub fn new(graph: &'g Graph, vertices: &[Vertex]) -> Self {
        let mask = graph.mask_of(vertices.iter().copied());
        let d = vertices.len() as u64;
        let marked = graph.edges_within(&mask);
        PairSquareSpace {
            graph,
            mask,
            size: d * d.saturating_sub(1) / 2,
            marked,
        }
    }
}

impl SearchSpace for PairSquareSpace<'_> {
    type Item = Pair;

    fn size(&self) -> u64 {
        self.size
    }

    fn query_cost(&self) -> u64 {
        1
    }

    fn marked_count(&self) -> u64 {
        self.marked
    }

    fn marked_item(&self, rank: u64) -> Pair {
        self.graph
            .nth_edge_within(&self.mask, rank)
            .expect("rank below marked count")
    }

    fn is_marked(&self, p: &Pair) -> bool {
        self.graph.has_edge(*p)
    }
}

/// The triangles of a known pair set `T`; a triangle is marked when all three pairs are edges of `G`.
pub struct TriangleSpace {
    size: u64,
    hits: Graph,
}

impl TriangleSpace {
    pub fn new(graph: &Graph, t: &EdgeSet) -> Self {
        let tg = t
            .to_graph(graph.n())
            .expect("pairs over the graph's vertex set");
        TriangleSpace {
            size: tg.triangle_count(),
            hits: tg.intersection(graph),
        }
    }
}

impl SearchSpace for TriangleSpace {
    type Item = Triangle;

    fn size(&self) -> u64 {
        self.size
    }

    fn query_cost(&self) -> u64 {
        3
    }

    fn marked_count(&self) -> u64 {
        self.hits.triangle_count()
    }

    fn marked_item(&self, rank: u64) -> Triangle {
        self.hits
            .nth_triangle(rank)
            .expect("rank below marked count")
    }

    fn is_marked(&self, t: &Triangle) -> bool {
        t.pairs().iter().all(|&p| self.hits.has_edge(p))
    }
}

/// Every triple of `[n]`, as searched by the folklore baseline.
pub struct AllTriplesSpace<'g> {
    graph: &'g Graph,
    marked: u64,
}

impl<'g> AllTriplesSpace<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        AllTriplesSpace {
            graph,
            marked: graph.triangle_count(),
        }
    }
}

impl SearchSpace for AllTriplesSpace<'_> {
    type Item = Triangle;

    fn size(&self) -> u64 {
        let n = u64::from(self.graph.n());
        n * (n - 1) * (n - 2) / 6
    }

    fn query_cost(&self) -> u64 {
        3
    }

    fn marked_count(&self) -> u64 {
        self.marked
    }

    fn marked_item(&self, rank: u64) -> Triangle {
        self.graph
            .nth_triangle(rank)
            .expect("rank below marked count")
    }

    fn is_marked(&self, t: &Triangle) -> bool {
        t.pairs().iter().all(|&p| self.graph.has_edge(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_space_counts() {
        let g = Graph::complete(5).unwrap();
        let s = PairSquareSpace::new(&g, &[2, 3, 4, 5]);
        assert_eq!(s.size(), 6);
        assert_eq!(s.marked_count(), 6);
        for r in 0..6 {
            assert!(s.is_marked(&s.marked_item(r)));
        }
        let one = PairSquareSpace::new(&g, &[2]);
        assert_eq!(one.size(), 0);
    }

    #[test]
    fn triangle_space_counts() {
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let t = EdgeSet::all_pairs(4);
        let s = TriangleSpace::new(&g, &t);
        assert_eq!(s.size(), 4);
        assert_eq!(s.marked_count(), 1);
        assert_eq!(s.marked_item(0).vertices(), [1, 2, 3]);
        assert_eq!(AllTriplesSpace::new(&g).size(), 4);
    }
}

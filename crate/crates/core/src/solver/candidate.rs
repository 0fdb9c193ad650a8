//! The candidate pair set `G′` with incrementally maintained `t(G′,·,·)`.

use std::collections::BTreeSet;

use crate::bits;
use crate::graph::{EdgeSet, Graph, Pair, Vertex};

/// `G′` as packed bit rows plus the common-neighbour count of every pair.
///
/// Pairs of `G′` whose count is below the peel threshold `τ` sit in a
/// worklist ordered by `(lo, hi)`; counts only ever decrease, so a pair
/// enters the worklist at most once.
#[derive(Debug, Clone)]
pub struct CandidateGraph {
    n: u32,
    words: usize,
    rows: Vec<u64>,
    t: Vec<u32>,
    tau: u64,
    below: BTreeSet<Pair>,
    len: usize,
}

impl CandidateGraph {
    /// All pairs of `[n]` except those inside any of the given vertex sets.
    pub fn complement_of_squares(n: u32, squares: &[Vec<Vertex>], tau: u64) -> Self {
        let words = bits::words_for(n as usize);
        let mut rows = vec![0u64; n as usize * words];
        for v in 0..n as usize {
            let row = &mut rows[v * words..(v + 1) * words];
            for u in 0..n as usize {
                if u != v {
                    bits::set(row, u);
                }
            }
        }
        for nb in squares {
            for &a in nb {
                let row = &mut rows[(a as usize - 1) * words..a as usize * words];
                for &b in nb {
                    if a != b {
                        bits::clear(row, b as usize - 1);
                    }
                }
            }
        }
        Self::from_rows(n, words, rows, tau)
    }

    pub fn from_pairs(n: u32, pairs: &EdgeSet, tau: u64) -> Self {
        let words = bits::words_for(n as usize);
        let mut rows = vec![0u64; n as usize * words];
        for p in pairs.iter() {
            let (a, b) = (p.lo() as usize - 1, p.hi() as usize - 1);
            bits::set(&mut rows[a * words..(a + 1) * words], b);
            bits::set(&mut rows[b * words..(b + 1) * words], a);
        }
        Self::from_rows(n, words, rows, tau)
    }

    fn from_rows(n: u32, words: usize, rows: Vec<u64>, tau: u64) -> Self {
        let nu = n as usize;
        let mut t = vec![0u32; nu * nu];
        let mut below = BTreeSet::new();
        let mut len = 0;
        for a in 0..nu {
            let ra = &rows[a * words..(a + 1) * words];
            for b in (a + 1)..nu {
                let c = bits::and_count(ra, &rows[b * words..(b + 1) * words]) as u32;
                t[a * nu + b] = c;
                t[b * nu + a] = c;
                if bits::get(ra, b) {
                    len += 1;
                    if u64::from(c) < tau {
                        below.insert(Pair::new(a as Vertex + 1, b as Vertex + 1));
                    }
                }
            }
        }
        CandidateGraph {
            n,
            words,
            rows,
            t,
            tau,
            below,
            len,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    fn row(&self, v: Vertex) -> &[u64] {
        let s = (v as usize - 1) * self.words;
        &self.rows[s..s + self.words]
    }

    pub fn contains(&self, p: Pair) -> bool {
        bits::get(self.row(p.lo()), p.hi() as usize - 1)
    }

    /// `t(G′, a, b)`.
    pub fn common(&self, p: Pair) -> u64 {
        u64::from(self.t[(p.lo() as usize - 1) * self.n as usize + p.hi() as usize - 1])
    }

    pub fn degree(&self, v: Vertex) -> u64 {
        bits::count(self.row(v))
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        bits::ones(self.row(v)).map(|i| i as Vertex + 1).collect()
    }

    /// Lowest-indexed vertex with nonzero degree.
    pub fn first_active_vertex(&self) -> Option<Vertex> {
        (1..=self.n).find(|&v| self.degree(v) > 0)
    }

    pub fn pairs(&self) -> EdgeSet {
        (1..=self.n)
            .flat_map(|a| {
                bits::ones(self.row(a))
                    .map(|i| i as Vertex + 1)
                    .filter(move |&b| b > a)
                    .map(move |b| Pair::new(a, b))
            })
            .collect()
    }

    fn dec(&mut self, a: Vertex, b: Vertex) {
        let nu = self.n as usize;
        let (ia, ib) = (a as usize - 1, b as usize - 1);
        self.t[ia * nu + ib] -= 1;
        self.t[ib * nu + ia] -= 1;
        let p = Pair::new(a, b);
        if u64::from(self.t[ia * nu + ib]) < self.tau && self.contains(p) {
            self.below.insert(p);
        }
    }

    /// Deletes a pair from `G′`; returns false if it was not present.
    pub fn remove(&mut self, p: Pair) -> bool {
        if !self.contains(p) {
            return false;
        }
        let (x, y) = (p.lo(), p.hi());
        let w = self.words;
        bits::clear(
            &mut self.rows[(x as usize - 1) * w..x as usize * w],
            y as usize - 1,
        );
        bits::clear(
            &mut self.rows[(y as usize - 1) * w..y as usize * w],
            x as usize - 1,
        );
        self.below.remove(&p);
        self.len -= 1;
        // x stops being a common neighbour of (y, z) for every z adjacent to x, and symmetrically.
        for z in self.neighbors(x) {
            self.dec(y, z);
        }
        for z in self.neighbors(y) {
            self.dec(x, z);
        }
        true
    }

    /// Repeatedly moves the smallest pair with `t(G′,·,·) < τ` out of `G′`
    /// until none is left; returns the moved pairs.
    pub fn peel(&mut self) -> EdgeSet {
        let mut moved = EdgeSet::new();
        while let Some(p) = self.below.pop_first() {
            self.remove(p);
            moved.insert(p);
        }
        moved
    }

    /// Removes and returns every pair incident to `v`.
    pub fn remove_incident(&mut self, v: Vertex) -> EdgeSet {
        let moved: EdgeSet = self
            .neighbors(v)
            .into_iter()
            .map(|u| Pair::new(u, v))
            .collect();
        for p in moved.iter() {
            self.remove(p);
        }
        moved
    }

    /// Pairs of `G′` with one endpoint in `a_side` and the other in `b_side`.
    pub fn bipartite_pairs(&self, a_side: &[Vertex], b_side: &[Vertex]) -> EdgeSet {
        let mut b_mask = vec![0u64; self.words];
        for &b in b_side {
            bits::set(&mut b_mask, b as usize - 1);
        }
        let mut out = EdgeSet::new();
        for &a in a_side {
            let row = self.row(a);
            for (w, (x, y)) in row.iter().zip(&b_mask).enumerate() {
                let mut word = x & y;
                while word != 0 {
                    let b = (w * 64 + word.trailing_zeros() as usize) as Vertex + 1;
                    word &= word - 1;
                    out.insert(Pair::new(a, b));
                }
            }
        }
        out
    }

    /// Whether every pair of `G′` has at most `t` common neighbours in `graph`.
    pub fn within_threshold(&self, graph: &Graph, t: f64) -> bool {
        self.pairs()
            .iter()
            .all(|p| graph.common_neighbors(p) as f64 <= t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_t(c: &CandidateGraph, p: Pair) -> u64 {
        (1..=c.n())
            .filter(|&z| z != p.lo() && z != p.hi())
            .filter(|&z| c.contains(Pair::new(p.lo(), z)) && c.contains(Pair::new(p.hi(), z)))
            .count() as u64
    }

    #[test]
    fn complete_candidate_on_eight_is_fully_peeled_at_tau_eight() {
        let mut c = CandidateGraph::complement_of_squares(8, &[], 8);
        assert_eq!(c.len(), 28);
        assert_eq!(c.common(Pair::new(1, 2)), 6);
        let t = c.peel();
        assert_eq!(t.len(), 28);
        assert!(c.is_empty());
    }

    #[test]
    fn empty_candidate_peels_to_nothing() {
        let mut c = CandidateGraph::from_pairs(6, &EdgeSet::new(), 5);
        assert!(c.peel().is_empty());
        assert_eq!(c.first_active_vertex(), None);
    }

    #[test]
    fn peel_postcondition_and_counts_stay_exact() {
        let mut c =
            CandidateGraph::complement_of_squares(12, &[vec![1, 2, 3, 4], vec![5, 6, 7]], 7);
        let moved = c.peel();
        for p in c.pairs().iter() {
            assert!(c.common(p) >= 7);
        }
        for p in EdgeSet::all_pairs(12).iter() {
            assert_eq!(c.common(p), brute_t(&c, p), "{p}");
        }
        assert!(moved.is_disjoint(&c.pairs()));
    }

    #[test]
    fn squares_are_excluded() {
        // C5: neighbourhoods of all five vertices remove the five "diagonals".
        let nb = vec![vec![2, 5], vec![1, 3], vec![2, 4], vec![3, 5], vec![4, 1]];
        let c = CandidateGraph::complement_of_squares(5, &nb, 0);
        assert_eq!(c.len(), 5);
        for (a, b) in [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)] {
            assert!(c.contains(Pair::new(a, b)));
        }
    }

    #[test]
    fn incident_removal_is_idempotent() {
        let mut c = CandidateGraph::from_pairs(
            5,
            &[
                Pair::new(1, 2),
                Pair::new(1, 3),
                Pair::new(1, 4),
                Pair::new(2, 3),
            ]
            .into_iter()
            .collect(),
            0,
        );
        assert_eq!(c.remove_incident(1).len(), 3);
        assert_eq!(c.degree(1), 0);
        assert!(c.remove_incident(1).is_empty());
        assert_eq!(c.len(), 1);
    }
}

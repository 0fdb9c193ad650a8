//! Plain-text edge list: a first line holding `n`, then one `u v` line per edge.

use std::fmt::Write as _;

use super::{Graph, GraphError, Pair, Vertex};

impl Graph {
    /// Parses the edge-list text format. Blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing vertex count".into(),
        })?;
        let n: u32 = header.parse().map_err(|_| GraphError::Parse {
            line: first,
            message: format!("expected vertex count, found `{header}`"),
        })?;
        let mut g = Graph::empty(n)?;
        for (line, l) in lines {
            let parse_err = |message: String| GraphError::Parse { line, message };
            let mut it = l.split_whitespace();
            let mut next = || -> Result<Vertex, GraphError> {
                let tok = it
                    .next()
                    .ok_or_else(|| parse_err("expected two vertices".into()))?;
                tok.parse()
                    .map_err(|_| parse_err(format!("bad vertex `{tok}`")))
            };
            let (a, b) = (next()?, next()?);
            if it.next().is_some() {
                return Err(parse_err("trailing tokens".into()));
            }
            g.check_vertex(a)?;
            g.check_vertex(b)?;
            let p = Pair::try_new(a, b)?;
            if g.has_edge(p) {
                return Err(GraphError::DuplicateEdge(p.lo(), p.hi()));
            }
            g.add(p.lo(), p.hi());
        }
        Ok(g)
    }

    /// Serialises to the edge-list format, edges in increasing `(u, v)` order with `u < v`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for p in self.edge_iter() {
            writeln!(out, "{} {}", p.lo(), p.hi()).expect("writing to a String cannot fail");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let g = Graph::parse_text("4\n1 2\n\n3 2\n4 1\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.to_text(), "4\n1 2\n1 4\n2 3\n");
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn loader_rejects_loops_and_duplicates() {
        assert_eq!(Graph::parse_text("3\n2 2\n"), Err(GraphError::Loop(2)));
        assert_eq!(
            Graph::parse_text("3\n1 2\n2 1\n"),
            Err(GraphError::DuplicateEdge(1, 2))
        );
        assert!(matches!(
            Graph::parse_text("3\n1 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(Graph::parse_text("3\n1 4\n").is_err());
        assert!(Graph::parse_text("").is_err());
        assert!(Graph::parse_text("3\n1 2 3\n").is_err());
    }
}

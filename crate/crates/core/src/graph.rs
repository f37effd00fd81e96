//! Simple undirected graphs with integer vertex ids, shortest-path services,
//! and the structural predicates used elsewhere in the crate.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Vertex id; always in `0..n` for the owning graph.
pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("loop edge at vertex {0}")]
    LoopEdge(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
}

/// Error raised while parsing one of the text formats; carries the 1-based
/// line number of the offending line.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

/// A finite simple undirected graph. Immutable once constructed; adjacency
/// lists are kept sorted so that every traversal is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list. Edges may be given
    /// in either endpoint order; loops and duplicates are rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            num_edges: seen.len(),
        })
    }

    /// Graph on `n` vertices with no edges.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            num_edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.num_edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as ordered pairs `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.num_edges);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Exact unweighted shortest-path distances from `v`; `None` marks
    /// vertices unreachable from `v`.
    pub fn bfs_distances(&self, v: Vertex) -> Result<Vec<Option<usize>>, GraphError> {
        self.check_vertex(v)?;
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Largest distance from `v` to a vertex in its component.
    pub fn eccentricity(&self, v: Vertex) -> Result<usize, GraphError> {
        let dist = self.bfs_distances(v)?;
        Ok(dist.into_iter().flatten().max().unwrap_or(0))
    }

    /// Per-component diameters plus the overall value (infinite when the
    /// graph has more than one component).
    pub fn diameter(&self) -> DiameterReport {
        let comps = self.components();
        let mut per_component = Vec::with_capacity(comps.len());
        for comp in &comps {
            let d = comp
                .iter()
                .map(|&v| self.eccentricity(v).unwrap())
                .max()
                .unwrap_or(0);
            per_component.push(d);
        }
        let finite = per_component.iter().copied().max().unwrap_or(0);
        DiameterReport {
            infinite: comps.len() > 1,
            finite,
            per_component,
        }
    }

    /// Connected components as sorted vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_edgeless(&self) -> bool {
        self.num_edges == 0
    }

    /// True iff the graph is a forest (no cycle), i.e. m = n - #components.
    pub fn is_acyclic(&self) -> bool {
        self.num_edges + self.components().len() == self.n()
    }

    /// Split-graph recognition via the degree-sequence criterion; returns a
    /// clique / independent-set partition witness when the graph is split.
    pub fn is_split(&self) -> Option<SplitPartition> {
        let n = self.n();
        let mut order: Vec<Vertex> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        // Hammer-Simeone: with degrees d_1 >= ... >= d_n and
        // m = max{i : d_i >= i-1}, the graph is split iff
        // sum_{i<=m} d_i = m(m-1) + sum_{i>m} d_i.
        let degs: Vec<usize> = order.iter().map(|&v| self.degree(v)).collect();
        let mut split_at = 0;
        for (i, &d) in degs.iter().enumerate() {
            if d >= i {
                split_at = i + 1;
            }
        }
        let head: usize = degs[..split_at].iter().sum();
        let tail: usize = degs[split_at..].iter().sum();
        if head != split_at * (split_at.saturating_sub(1)) + tail {
            return None;
        }
        let mut clique = order[..split_at].to_vec();
        let mut independent = order[split_at..].to_vec();
        clique.sort_unstable();
        independent.sort_unstable();
        for (i, &u) in clique.iter().enumerate() {
            for &v in &clique[i + 1..] {
                debug_assert!(self.has_edge(u, v), "split witness clique check");
            }
        }
        for (i, &u) in independent.iter().enumerate() {
            for &v in &independent[i + 1..] {
                debug_assert!(!self.has_edge(u, v), "split witness independence check");
            }
        }
        Some(SplitPartition {
            clique,
            independent,
        })
    }

    /// Subgraph induced by `keep` (sorted, deduplicated internally), with
    /// vertices renumbered in ascending order of their original ids. Returns
    /// the subgraph and the new-id -> old-id table.
    pub fn induced_subgraph(&self, keep: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut old_ids: Vec<Vertex> = keep.to_vec();
        old_ids.sort_unstable();
        old_ids.dedup();
        let mut new_id = vec![usize::MAX; self.n()];
        for (idx, &v) in old_ids.iter().enumerate() {
            new_id[v] = idx;
        }
        let mut adj = vec![Vec::new(); old_ids.len()];
        let mut m = 0;
        for (idx, &v) in old_ids.iter().enumerate() {
            for &w in &self.adj[v] {
                if new_id[w] != usize::MAX {
                    adj[idx].push(new_id[w]);
                    if new_id[w] > idx {
                        m += 1;
                    }
                }
            }
        }
        (Graph { adj, num_edges: m }, old_ids)
    }

    /// Parses the graph text format: first content line `n m`, then `m` lines
    /// `u v` with `0 <= u < v < n`. Lines starting with `#` and blank lines
    /// are ignored. Duplicate edges are rejected.
    pub fn from_text(input: &str) -> Result<Self, FormatError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(FormatError::new(
                    lineno,
                    format!("expected two fields, found {}", fields.len()),
                ));
            }
            let a: usize = fields[0]
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad integer `{}`", fields[0])))?;
            let b: usize = fields[1]
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad integer `{}`", fields[1])))?;
            match header {
                None => header = Some((a, b)),
                Some((n, m)) => {
                    if edges.len() == m {
                        return Err(FormatError::new(
                            lineno,
                            format!("more than the declared {m} edges"),
                        ));
                    }
                    if a >= b {
                        return Err(FormatError::new(
                            lineno,
                            format!("edge must satisfy u < v, got {a} {b}"),
                        ));
                    }
                    if b >= n {
                        return Err(FormatError::new(
                            lineno,
                            format!("endpoint {b} out of range for n={n}"),
                        ));
                    }
                    if !seen.insert((a, b)) {
                        return Err(FormatError::new(lineno, format!("duplicate edge {a} {b}")));
                    }
                    edges.push((a, b));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| FormatError::new(1, "missing `n m` header"))?;
        if edges.len() != m {
            return Err(FormatError::new(
                1,
                format!("declared {m} edges but found {}", edges.len()),
            ));
        }
        Graph::new(n, &edges).map_err(|e| FormatError::new(1, e.to_string()))
    }

    /// Writes the text format accepted by [`Graph::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Result of [`Graph::diameter`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterReport {
    /// True iff the graph is disconnected, i.e. the overall diameter is
    /// infinite.
    pub infinite: bool,
    /// Largest per-component diameter (0 for an empty graph).
    pub finite: usize,
    /// Diameter of each component, in [`Graph::components`] order.
    pub per_component: Vec<usize>,
}

impl DiameterReport {
    /// Overall diameter; `None` when infinite.
    pub fn overall(&self) -> Option<usize> {
        (!self.infinite).then_some(self.finite)
    }
}

/// Clique / independent-set partition witnessing that a graph is split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPartition {
    pub clique: Vec<Vertex>,
    pub independent: Vec<Vertex>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        Graph::new(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn bfs_on_path() {
        let g = path(3);
        let d = g.bfs_distances(0).unwrap();
        assert_eq!(d, vec![Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn bfs_unreachable() {
        let g = Graph::edgeless(2);
        let d = g.bfs_distances(0).unwrap();
        assert_eq!(d, vec![Some(0), None]);
    }

    #[test]
    fn bfs_complete_graph() {
        let g = complete(4);
        let d = g.bfs_distances(2).unwrap();
        for v in 0..4 {
            assert_eq!(d[v], Some(usize::from(v != 2)));
        }
    }

    #[test]
    fn bfs_rejects_bad_vertex() {
        let g = path(3);
        assert!(matches!(
            g.bfs_distances(3),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn bfs_symmetric_on_small_graphs() {
        // d(u,v) = d(v,u) over every labeled graph on 4 vertices.
        let all_edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for mask in 0u32..64 {
            let edges: Vec<_> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(4, &edges).unwrap();
            let dist: Vec<_> = (0..4).map(|v| g.bfs_distances(v).unwrap()).collect();
            for u in 0..4 {
                for v in 0..4 {
                    assert_eq!(dist[u][v], dist[v][u]);
                }
            }
        }
    }

    #[test]
    fn diameter_k2() {
        assert_eq!(complete(2).diameter().overall(), Some(1));
    }

    #[test]
    fn diameter_disconnected() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let report = g.diameter();
        assert!(report.infinite);
        assert_eq!(report.overall(), None);
        assert_eq!(report.per_component, vec![1, 1]);
    }

    #[test]
    fn components_and_acyclicity() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert!(g.is_acyclic());
        assert!(!cycle(4).is_acyclic());
        assert!(path(6).is_acyclic());
    }

    #[test]
    fn split_recognition() {
        // Triangle plus pendant vertex is split.
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let part = g.is_split().unwrap();
        assert_eq!(part.clique, vec![0, 1, 2]);
        assert_eq!(part.independent, vec![3]);
        // C4 is the classic non-split obstruction.
        assert!(cycle(4).is_split().is_none());
        // C5 is also not split; P4 is.
        assert!(cycle(5).is_split().is_none());
        assert!(path(4).is_split().is_some());
    }

    #[test]
    fn split_matches_brute_force_small() {
        // Exhaustive cross-check on every labeled graph with up to 5 vertices.
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                let brute = (0u32..(1 << n)).any(|cm| {
                    let clique: Vec<_> = (0..n).filter(|&v| cm & (1 << v) != 0).collect();
                    let indep: Vec<_> = (0..n).filter(|&v| cm & (1 << v) == 0).collect();
                    clique
                        .iter()
                        .enumerate()
                        .all(|(i, &u)| clique[i + 1..].iter().all(|&v| g.has_edge(u, v)))
                        && indep
                            .iter()
                            .enumerate()
                            .all(|(i, &u)| indep[i + 1..].iter().all(|&v| !g.has_edge(u, v)))
                });
                assert_eq!(g.is_split().is_some(), brute, "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let txt = g.to_text();
        assert_eq!(Graph::from_text(&txt).unwrap(), g);
    }

    #[test]
    fn text_parse_errors_carry_line_numbers() {
        let err = Graph::from_text("3 1\n1 0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = Graph::from_text("# c\n3 2\n0 1\n0 1\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("duplicate"));
        let err = Graph::from_text("2 1\n0 5\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = Graph::from_text("2 2\n0 1\n").unwrap_err();
        assert!(err.message.contains("declared"));
    }

    #[test]
    fn constructor_rejects_bad_edges() {
        assert!(matches!(
            Graph::new(2, &[(0, 0)]),
            Err(GraphError::LoopEdge(0))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn induced_subgraph_renumbers() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (sub, old) = g.induced_subgraph(&[1, 2, 4]);
        assert_eq!(old, vec![1, 2, 4]);
        assert_eq!(sub.n(), 3);
        assert_eq!(sub.edges(), vec![(0, 1)]);
    }
}

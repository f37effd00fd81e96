//! Balls in a graph and deduplicated families of balls.
//!
//! A ball is identified by its member set, not by a (center, radius) pair:
//! two balls with equal member sets are interchangeable for the non-clashing
//! condition, so a family keeps a single copy labeled by the lexicographically
//! least (center, radius) witness.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{FormatError, Graph, GraphError, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ball ({center}, {radius}) does not match its recorded member set")]
    InvalidBall { center: Vertex, radius: usize },
    #[error("family is empty but marked strict")]
    EmptyStrict,
}

/// A ball: all vertices at distance at most `radius` from `center`.
/// `members` is sorted; unreachable vertices are never included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    center: Vertex,
    radius: usize,
    members: Vec<Vertex>,
}

impl Ball {
    pub fn center(&self) -> Vertex {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Bitset mirror of the member set, over `n` vertices.
    pub fn to_bitset(&self, n: usize) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(n);
        for &v in &self.members {
            bits.insert(v);
        }
        bits
    }

    /// Canonical `(center, radius)` label used by the text and JSON formats.
    pub fn label(&self) -> (Vertex, usize) {
        (self.center, self.radius)
    }
}

/// Computes the ball of radius `r` around `v`.
pub fn ball(g: &Graph, v: Vertex, r: usize) -> Result<Ball, GraphError> {
    let dist = g.bfs_distances(v)?;
    let members: Vec<Vertex> = (0..g.n())
        .filter(|&u| matches!(dist[u], Some(d) if d <= r))
        .collect();
    Ok(Ball {
        center: v,
        radius: r,
        members,
    })
}

/// A deduplicated set of balls over a graph the family owns. `strict` records
/// that the family consists of *all* balls of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallFamily {
    graph: Graph,
    balls: Vec<Ball>,
    strict: bool,
}

impl BallFamily {
    /// Family of every distinct ball of `g`: all `(v, r)` with `v` a vertex
    /// and `0 <= r <= ecc(v) + 1`, deduplicated by member set, keeping the
    /// lexicographically least `(center, radius)` witness.
    pub fn strict(g: &Graph) -> Self {
        let mut balls: Vec<Ball> = Vec::new();
        let mut index: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for v in 0..g.n() {
            let dist = g.bfs_distances(v).unwrap();
            let ecc = dist.iter().flatten().copied().max().unwrap_or(0);
            for r in 0..=ecc + 1 {
                let members: Vec<Vertex> = (0..g.n())
                    .filter(|&u| matches!(dist[u], Some(d) if d <= r))
                    .collect();
                if !index.contains_key(&members) {
                    index.insert(members.clone(), balls.len());
                    balls.push(Ball {
                        center: v,
                        radius: r,
                        members,
                    });
                }
            }
        }
        balls.sort_by_key(|b| (b.center, b.radius));
        BallFamily {
            graph: g.clone(),
            balls,
            strict: true,
        }
    }

    /// Family from explicit `(center, radius)` pairs. Pairs yielding equal
    /// member sets collapse to one ball under the lexicographically least
    /// label among the *requested* pairs.
    pub fn from_center_radius_pairs(
        g: &Graph,
        pairs: &[(Vertex, usize)],
    ) -> Result<Self, FamilyError> {
        let mut sorted = pairs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut balls: Vec<Ball> = Vec::new();
        let mut index: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for (v, r) in sorted {
            let b = ball(g, v, r)?;
            if !index.contains_key(&b.members) {
                index.insert(b.members.clone(), balls.len());
                balls.push(b);
            }
        }
        Ok(BallFamily {
            graph: g.clone(),
            balls,
            strict: false,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn ball(&self, id: usize) -> &Ball {
        &self.balls[id]
    }

    /// Index of the family ball whose member set equals `members`.
    pub fn find_by_members(&self, members: &[Vertex]) -> Option<usize> {
        self.balls.iter().position(|b| b.members == members)
    }

    /// Index of the family ball with canonical label `(center, radius)`.
    pub fn find_by_label(&self, center: Vertex, radius: usize) -> Option<usize> {
        self.balls
            .iter()
            .position(|b| b.center == center && b.radius == radius)
    }

    /// Largest ball size; an upper bound for the teaching dimension since
    /// the identity map T(B) = B is always non-clashing.
    pub fn max_ball_size(&self) -> usize {
        self.balls.iter().map(Ball::len).max().unwrap_or(0)
    }

    /// Parses the family text format against `g`: either the single token
    /// `STRICT`, or one `center radius` line per requested ball. `#` comments
    /// and blank lines are ignored.
    pub fn from_text(g: &Graph, input: &str) -> Result<Self, FormatError> {
        let mut pairs: Vec<(Vertex, usize)> = Vec::new();
        let mut strict = false;
        let mut saw_content = false;
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if strict {
                return Err(FormatError::new(lineno, "content after STRICT token"));
            }
            if line == "STRICT" {
                if saw_content {
                    return Err(FormatError::new(lineno, "STRICT mixed with ball lines"));
                }
                strict = true;
                saw_content = true;
                continue;
            }
            saw_content = true;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(FormatError::new(
                    lineno,
                    format!("expected `center radius`, found {} fields", fields.len()),
                ));
            }
            let c: usize = fields[0]
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad integer `{}`", fields[0])))?;
            let r: usize = fields[1]
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad integer `{}`", fields[1])))?;
            if c >= g.n() {
                return Err(FormatError::new(
                    lineno,
                    format!("center {c} out of range for n={}", g.n()),
                ));
            }
            pairs.push((c, r));
        }
        if strict {
            Ok(BallFamily::strict(g))
        } else {
            BallFamily::from_center_radius_pairs(g, &pairs)
                .map_err(|e| FormatError::new(1, e.to_string()))
        }
    }

    /// Writes the text format accepted by [`BallFamily::from_text`].
    pub fn to_text(&self) -> String {
        if self.strict {
            return "STRICT\n".to_string();
        }
        let mut out = String::new();
        for b in &self.balls {
            let _ = writeln!(out, "{} {}", b.center, b.radius);
        }
        out
    }

    /// Revalidates the family invariants: every ball recomputable from its
    /// label and no two balls sharing a member set.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let mut seen = std::collections::HashSet::new();
        for b in &self.balls {
            let fresh = ball(&self.graph, b.center, b.radius)?;
            if fresh.members != b.members {
                return Err(FamilyError::InvalidBall {
                    center: b.center,
                    radius: b.radius,
                });
            }
            if !seen.insert(&b.members) {
                return Err(FamilyError::InvalidBall {
                    center: b.center,
                    radius: b.radius,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn radius_zero_is_singleton() {
        let g = path(3);
        let b = ball(&g, 1, 0).unwrap();
        assert_eq!(b.members(), &[1]);
    }

    #[test]
    fn ball_on_path() {
        let g = path(3);
        assert_eq!(ball(&g, 1, 1).unwrap().members(), &[0, 1, 2]);
    }

    #[test]
    fn ball_covers_c5_at_radius_two() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(ball(&g, 0, 2).unwrap().members(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn ball_never_crosses_components() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(ball(&g, 0, 9).unwrap().members(), &[0, 1]);
    }

    #[test]
    fn strict_family_k2() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let fam = BallFamily::strict(&g);
        let sets: Vec<_> = fam.balls().iter().map(|b| b.members().to_vec()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 1], vec![1]]);
        assert!(fam.is_strict());
    }

    #[test]
    fn strict_family_edgeless() {
        let fam = BallFamily::strict(&Graph::edgeless(3));
        assert_eq!(fam.len(), 3);
        assert!(fam.balls().iter().all(|b| b.len() == 1));
    }

    #[test]
    fn strict_matches_naive_enumeration() {
        // Independent oracle: double loop over (v, r) with set dedup, for all
        // labeled graphs on 4 vertices.
        let all_edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for mask in 0u32..64 {
            let edges: Vec<_> = all_edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(4, &edges).unwrap();
            let mut sets = std::collections::BTreeSet::new();
            for v in 0..4 {
                for r in 0..=5 {
                    sets.insert(ball(&g, v, r).unwrap().members().to_vec());
                }
            }
            let fam = BallFamily::strict(&g);
            let fam_sets: std::collections::BTreeSet<_> = fam
                .balls()
                .iter()
                .map(|b| b.members().to_vec())
                .collect();
            assert_eq!(fam_sets, sets, "mask={mask}");
            assert_eq!(fam.len(), sets.len());
        }
    }

    #[test]
    fn dedup_keeps_lex_least_label() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let fam = BallFamily::strict(&g);
        let full = fam.find_by_members(&[0, 1]).unwrap();
        assert_eq!(fam.ball(full).label(), (0, 1));
    }

    #[test]
    fn radius_monotone_and_ecc_absorbs() {
        let g = path(5);
        for v in 0..5 {
            let ecc = g.eccentricity(v).unwrap();
            for r in 0..ecc + 2 {
                let small = ball(&g, v, r).unwrap();
                let big = ball(&g, v, r + 1).unwrap();
                assert!(small.members().iter().all(|&u| big.contains(u)));
            }
            let comp: Vec<_> = (0..5).collect();
            assert_eq!(ball(&g, v, ecc).unwrap().members(), &comp[..]);
        }
    }

    #[test]
    fn singleton_balls_cover_vertices() {
        let g = path(4);
        let fam = BallFamily::strict(&g);
        let mut covered: Vec<Vertex> = fam
            .balls()
            .iter()
            .filter(|b| b.len() == 1)
            .map(|b| b.members()[0])
            .collect();
        covered.sort_unstable();
        assert_eq!(covered, vec![0, 1, 2, 3]);
    }

    #[test]
    fn family_text_round_trip() {
        let g = path(4);
        let fam = BallFamily::from_center_radius_pairs(&g, &[(0, 1), (2, 0), (3, 2)]).unwrap();
        let txt = fam.to_text();
        let back = BallFamily::from_text(&g, &txt).unwrap();
        assert_eq!(back, fam);
        let strict = BallFamily::from_text(&g, "STRICT\n").unwrap();
        assert!(strict.is_strict());
        assert_eq!(BallFamily::from_text(&g, &strict.to_text()).unwrap(), strict);
    }

    #[test]
    fn family_text_errors() {
        let g = path(3);
        assert_eq!(BallFamily::from_text(&g, "0 1\nSTRICT\n").unwrap_err().line, 2);
        assert_eq!(BallFamily::from_text(&g, "9 1\n").unwrap_err().line, 1);
        assert_eq!(BallFamily::from_text(&g, "0 1 2\n").unwrap_err().line, 1);
    }

    #[test]
    fn validate_catches_tampering() {
        let g = path(3);
        let fam = BallFamily::strict(&g);
        assert!(fam.validate().is_ok());
        let mut bad = fam.clone();
        bad.balls[0].members = vec![0, 2];
        assert!(bad.validate().is_err());
    }
}

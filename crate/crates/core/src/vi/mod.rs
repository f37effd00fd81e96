//! Kernelization by vertex integrity: witness search, twin-block
//! classification, blueprint/core machinery, instance reduction, solution
//! lifting, and the end-to-end reduced-solve pipeline.

mod blueprint;
mod bounds;
mod cores;
mod lift;
mod pipeline;
mod reduce;
mod twins;

pub use blueprint::{blueprint, perfect_classes, Blueprint};
pub use bounds::{bounds, Bounds};
pub use cores::{compactify, cores, is_compact, Cores};
pub use lift::lift;
pub use pipeline::{fpt_solve, FptReport};
pub use reduce::{induced_balls, reduce_instance, Provenance, Reduced, Retain};
pub use twins::{twin_classes, TwinClass, TwinClasses};

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::teaching::TeachingError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViError {
    #[error("invalid vertex-integrity witness: {0}")]
    InvalidWitness(String),
    #[error("witness does not match this graph")]
    WitnessMismatch,
    #[error("ball {ball_id} is centered in the separator; blueprint undefined")]
    BallCenteredInSeparator { ball_id: usize },
    #[error("retain must be at least 3, got {0}")]
    RetainTooSmall(usize),
    #[error("induced-ball hypothesis violated at component {component}: {reason}")]
    InducedHypothesisViolated { component: usize, reason: String },
    #[error("induced set is not a ball of the reduced graph: {0}")]
    InducedBallMismatch(String),
    #[error("no conflict-free swap for vertex {vertex} in teaching set of ball {ball_id} despite a full core")]
    CompactifySwapFailed { ball_id: usize, vertex: Vertex },
    #[error("compactification made no progress; {0} violations remain")]
    CompactifyStalled(usize),
    #[error("lift infeasible: no interchangeable kept twin pair for class {class_id}")]
    LiftInfeasible { class_id: usize },
    #[error("lifted map has {0} conflicts")]
    LiftProducedConflicts(usize),
    #[error(transparent)]
    Teaching(#[from] TeachingError),
}

/// Witness that a graph has vertex integrity at most `p`: a separator `X`
/// such that every component of G - X together with X has at most `p`
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViWitness {
    p: usize,
    n: usize,
    x: Vec<Vertex>,
    components: Vec<Vec<Vertex>>,
}

impl ViWitness {
    /// Validates `x` as a witness for budget `p` on `g` and records the
    /// components of G - X (sorted vertex sets, ascending by smallest
    /// member; this ordering is the total order used by the core and lift
    /// machinery).
    pub fn new(g: &Graph, p: usize, mut x: Vec<Vertex>) -> Result<Self, ViError> {
        x.sort_unstable();
        x.dedup();
        if let Some(&v) = x.iter().find(|&&v| v >= g.n()) {
            return Err(ViError::InvalidWitness(format!("vertex {v} out of range")));
        }
        if x.len() > p {
            return Err(ViError::InvalidWitness(format!(
                "|X| = {} exceeds budget {p}",
                x.len()
            )));
        }
        let components = components_without(g, &x);
        for comp in &components {
            if comp.len() + x.len() > p {
                return Err(ViError::InvalidWitness(format!(
                    "component of size {} plus |X| = {} exceeds budget {p}",
                    comp.len(),
                    x.len()
                )));
            }
        }
        Ok(ViWitness {
            p,
            n: g.n(),
            x,
            components,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn x(&self) -> &[Vertex] {
        &self.x
    }

    pub fn components(&self) -> &[Vec<Vertex>] {
        &self.components
    }

    pub fn in_separator(&self, v: Vertex) -> bool {
        self.x.binary_search(&v).is_ok()
    }

    /// True iff this witness was built for a graph shaped like `g`.
    pub fn matches(&self, g: &Graph) -> bool {
        self.n == g.n() && components_without(g, &self.x) == self.components
    }
}

fn components_without(g: &Graph, x: &[Vertex]) -> Vec<Vec<Vertex>> {
    let in_x: BTreeSet<Vertex> = x.iter().copied().collect();
    let mut seen = vec![false; g.n()];
    for &v in x {
        seen[v] = true;
    }
    let mut comps = Vec::new();
    for start in 0..g.n() {
        if seen[start] || in_x.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
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

/// Exact witness search by iterative-deepening branching: while some
/// component of G - X is too large, grow a connected subgraph of size
/// p - |X| + 1 inside it by BFS; every valid witness extending X must pick
/// up one of its vertices, so branching on them is complete. Depth is at
/// most p. Returns `None` when no witness for budget `p` exists.
pub fn vi_witness(g: &Graph, p: usize) -> Option<ViWitness> {
    if p == 0 {
        return None;
    }
    let mut x = BTreeSet::new();
    if !branch(g, p, &mut x) {
        return None;
    }
    let witness =
        ViWitness::new(g, p, x.into_iter().collect()).expect("searched witness is valid");
    Some(witness)
}

fn branch(g: &Graph, p: usize, x: &mut BTreeSet<Vertex>) -> bool {
    let budget = p - x.len();
    let offender = find_offending_subgraph(g, x, budget);
    let probe = match offender {
        None => return true,
        Some(q) => q,
    };
    if x.len() >= p {
        return false;
    }
    for &v in &probe {
        x.insert(v);
        if branch(g, p, x) {
            return true;
        }
        x.remove(&v);
    }
    false
}

/// Finds a connected subgraph of size `budget + 1` inside some component of
/// G - X larger than `budget`, grown by BFS from the component's smallest
/// vertex (deterministic). Returns `None` when every component fits.
fn find_offending_subgraph(g: &Graph, x: &BTreeSet<Vertex>, budget: usize) -> Option<Vec<Vertex>> {
    let mut seen = vec![false; g.n()];
    for &v in x {
        seen[v] = true;
    }
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        if comp.len() > budget {
            // comp is in BFS order from `start`; its prefix is connected.
            comp.truncate(budget + 1);
            return Some(comp);
        }
    }
    None
}

//! Teaching maps over ball families, the non-clashing verifier, redundancy
//! pruning over twin orbits, and the embedding of arbitrary finite binary
//! concept classes into balls of radius one.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::balls::{Ball, BallFamily};
use crate::graph::{Graph, Vertex};
use crate::vi::{twin_classes, ViWitness};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TeachingError {
    #[error("map has {found} teaching sets for a family of {expected} balls")]
    DomainMismatch { expected: usize, found: usize },
    #[error("teaching vertex {vertex} is not a member of ball {ball_id}")]
    NotSubset { ball_id: usize, vertex: Vertex },
    #[error("input map has {0} conflicts; a verified map is required")]
    InputHasConflicts(usize),
    #[error("concepts {0} and {1} are identical")]
    DuplicateConcept(usize, usize),
    #[error("concept class is empty")]
    EmptyConceptList,
    #[error("concept {concept} refers to element {element} outside the universe")]
    ElementOutOfRange { concept: usize, element: usize },
    #[error("teaching map JSON: {0}")]
    MapFormat(String),
    #[error("witness does not match the family's graph")]
    WitnessMismatch,
}

/// Assigns each ball of a family a teaching set (a subset of the ball).
/// Teaching sets are stored positionally, parallel to the family's ball list,
/// each sorted. Empty teaching sets are legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TeachingMap {
    sets: Vec<Vec<Vertex>>,
}

impl TeachingMap {
    pub fn new(mut sets: Vec<Vec<Vertex>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        TeachingMap { sets }
    }

    /// The map T(B) = B; trivially non-clashing for any deduplicated family.
    pub fn identity(family: &BallFamily) -> Self {
        TeachingMap {
            sets: family
                .balls()
                .iter()
                .map(|b| b.members().to_vec())
                .collect(),
        }
    }

    pub fn empty(family: &BallFamily) -> Self {
        TeachingMap {
            sets: vec![Vec::new(); family.len()],
        }
    }

    pub fn sets(&self) -> &[Vec<Vertex>] {
        &self.sets
    }

    pub fn set(&self, ball_id: usize) -> &[Vertex] {
        &self.sets[ball_id]
    }

    pub fn set_mut(&mut self, ball_id: usize) -> &mut Vec<Vertex> {
        &mut self.sets[ball_id]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Maximum teaching-set size.
    pub fn dimension(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Serializes to the map JSON format, with balls identified by their
    /// canonical `(center, radius)` labels.
    pub fn to_json(&self, family: &BallFamily) -> String {
        let entries: Vec<MapEntryJson> = family
            .balls()
            .iter()
            .zip(&self.sets)
            .map(|(b, t)| MapEntryJson {
                center: b.center(),
                radius: b.radius(),
                teach: t.clone(),
            })
            .collect();
        let doc = MapJson {
            dimension: self.dimension(),
            entries,
        };
        serde_json::to_string_pretty(&doc).expect("teaching map serialization")
    }

    /// Parses the map JSON format. Every family ball must appear exactly
    /// once, matched by canonical label, and the recorded dimension must
    /// agree with the entries.
    pub fn from_json(family: &BallFamily, input: &str) -> Result<Self, TeachingError> {
        let doc: MapJson =
            serde_json::from_str(input).map_err(|e| TeachingError::MapFormat(e.to_string()))?;
        let mut sets: Vec<Option<Vec<Vertex>>> = vec![None; family.len()];
        for entry in doc.entries {
            let id = family
                .find_by_label(entry.center, entry.radius)
                .ok_or_else(|| {
                    TeachingError::MapFormat(format!(
                        "no family ball with label ({}, {})",
                        entry.center, entry.radius
                    ))
                })?;
            if sets[id].is_some() {
                return Err(TeachingError::MapFormat(format!(
                    "duplicate entry for ball ({}, {})",
                    entry.center, entry.radius
                )));
            }
            sets[id] = Some(entry.teach);
        }
        let missing = sets.iter().position(Option::is_none);
        if let Some(id) = missing {
            let b = family.ball(id);
            return Err(TeachingError::MapFormat(format!(
                "missing entry for ball ({}, {})",
                b.center(),
                b.radius()
            )));
        }
        let map = TeachingMap::new(sets.into_iter().map(Option::unwrap).collect());
        if map.dimension() != doc.dimension {
            return Err(TeachingError::MapFormat(format!(
                "recorded dimension {} but entries have dimension {}",
                doc.dimension,
                map.dimension()
            )));
        }
        Ok(map)
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    dimension: usize,
    entries: Vec<MapEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct MapEntryJson {
    center: Vertex,
    radius: usize,
    teach: Vec<Vertex>,
}

/// A pair of ball ids (first < second) with no distinguishing vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Conflict {
    pub first: usize,
    pub second: usize,
}

/// True iff `w` lies outside the intersection of the two balls, so that `w`
/// (when taught for either ball) tells them apart.
pub fn distinguishes(w: Vertex, b1: &Ball, b2: &Ball) -> bool {
    !(b1.contains(w) && b2.contains(w))
}

/// Checks the non-clashing condition for every pair of distinct balls and
/// returns all conflicting pairs in ascending order. An empty result means
/// `map` is a positive non-clashing teaching map for the family.
pub fn verify(family: &BallFamily, map: &TeachingMap) -> Result<Vec<Conflict>, TeachingError> {
    verify_with_workers(family, map, 1)
}

/// Like [`verify`], optionally fanning the pair checks out over `workers`
/// threads. The result is canonicalized, so the worker count never changes
/// the output.
pub fn verify_with_workers(
    family: &BallFamily,
    map: &TeachingMap,
    workers: usize,
) -> Result<Vec<Conflict>, TeachingError> {
    check_domain(family, map)?;
    let n = family.graph().n();
    let bits: Vec<FixedBitSet> = family.balls().iter().map(|b| b.to_bitset(n)).collect();
    let ids: Vec<usize> = (0..family.len()).collect();
    let workers = workers.max(1).min(ids.len().max(1));
    let mut conflicts = if workers <= 1 {
        scan_pairs(family, map, &bits, &ids)
    } else {
        let chunk = ids.len().div_ceil(workers);
        let bits = &bits;
        std::thread::scope(|scope| {
            let handles: Vec<_> = ids
                .chunks(chunk)
                .map(|slice| scope.spawn(move || scan_pairs(family, map, bits, slice)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("verify worker"))
                .collect::<Vec<_>>()
        })
    };
    conflicts.sort_unstable();
    Ok(conflicts)
}

fn check_domain(family: &BallFamily, map: &TeachingMap) -> Result<(), TeachingError> {
    if map.len() != family.len() {
        return Err(TeachingError::DomainMismatch {
            expected: family.len(),
            found: map.len(),
        });
    }
    for (id, teach) in map.sets().iter().enumerate() {
        for &w in teach {
            if !family.ball(id).contains(w) {
                return Err(TeachingError::NotSubset { ball_id: id, vertex: w });
            }
        }
    }
    Ok(())
}

fn scan_pairs(
    family: &BallFamily,
    map: &TeachingMap,
    bits: &[FixedBitSet],
    firsts: &[usize],
) -> Vec<Conflict> {
    let mut conflicts = Vec::new();
    for &i in firsts {
        for j in i + 1..family.len() {
            let distinguished = map.set(i)
                .iter()
                .chain(map.set(j))
                .any(|&w| !(bits[i].contains(w) && bits[j].contains(w)));
            if !distinguished {
                conflicts.push(Conflict { first: i, second: j });
            }
        }
    }
    conflicts
}

/// Removes redundant teaching vertices: while some teaching set holds three
/// or more vertices of one twin orbit, one of them lying outside the ball
/// center's component can be dropped without creating a conflict. On return
/// every orbit contributes at most two vertices to every teaching set.
///
/// The orbit structure depends on the chosen separator, so the witness is an
/// explicit input rather than recomputed.
pub fn prune_redundant(
    family: &BallFamily,
    map: &TeachingMap,
    witness: &ViWitness,
) -> Result<TeachingMap, TeachingError> {
    if !witness.matches(family.graph()) {
        return Err(TeachingError::WitnessMismatch);
    }
    let conflicts = verify(family, map)?;
    if !conflicts.is_empty() {
        return Err(TeachingError::InputHasConflicts(conflicts.len()));
    }
    let classes = twin_classes(family, witness);
    let mut pruned = map.clone();
    loop {
        let mut removed = false;
        for ball_id in 0..family.len() {
            let center_comp = classes.component_of(family.ball(ball_id).center());
            loop {
                let teach = pruned.set(ball_id);
                // Group the teaching set by orbit; vertices in X have none.
                let mut by_orbit: std::collections::BTreeMap<(usize, usize), Vec<Vertex>> =
                    std::collections::BTreeMap::new();
                for &v in teach {
                    if let Some(orbit) = classes.orbit_of(v) {
                        by_orbit.entry(orbit).or_default().push(v);
                    }
                }
                let victim = by_orbit.values().find_map(|members| {
                    if members.len() < 3 {
                        return None;
                    }
                    // At most one member shares the center's component, so an
                    // eligible vertex always exists; drop the largest.
                    members
                        .iter()
                        .rev()
                        .find(|&&v| classes.component_of(v) != center_comp)
                        .copied()
                });
                match victim {
                    Some(v) => {
                        pruned.set_mut(ball_id).retain(|&u| u != v);
                        removed = true;
                    }
                    None => break,
                }
            }
        }
        if !removed {
            break;
        }
    }
    debug_assert!(verify(family, &pruned)
        .map(|c| c.is_empty())
        .unwrap_or(false));
    Ok(pruned)
}

/// Vertex roles in a concept-class embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedRole {
    /// Universe element with the given index.
    Element(usize),
    /// Vertex standing for the concept with the given index.
    Concept(usize),
}

/// A concept class embedded as balls of radius one: the graph, the family of
/// concept balls, and per-vertex roles.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub family: BallFamily,
    pub roles: Vec<EmbedRole>,
}

impl Embedding {
    pub fn graph(&self) -> &Graph {
        self.family.graph()
    }

    /// Vertex standing for concept `j`.
    pub fn concept_vertex(&self, j: usize) -> Vertex {
        self.roles
            .iter()
            .position(|r| *r == EmbedRole::Concept(j))
            .expect("concept vertex")
    }
}

/// Embeds a finite binary concept class over universe `{0..num_elements-1}`
/// into balls in a graph: one vertex per element, one per concept; concept
/// vertices form a clique and each is adjacent to exactly its members. The
/// family is the radius-one ball around each concept vertex, so each ball
/// meets the universe in exactly its concept.
pub fn embed_concept_class(
    num_elements: usize,
    concepts: &[Vec<usize>],
) -> Result<Embedding, TeachingError> {
    if concepts.is_empty() {
        return Err(TeachingError::EmptyConceptList);
    }
    let mut normalized: Vec<Vec<usize>> = Vec::with_capacity(concepts.len());
    for (j, concept) in concepts.iter().enumerate() {
        let mut c = concept.clone();
        c.sort_unstable();
        c.dedup();
        if let Some(&e) = c.iter().find(|&&e| e >= num_elements) {
            return Err(TeachingError::ElementOutOfRange {
                concept: j,
                element: e,
            });
        }
        if let Some(prev) = normalized.iter().position(|p| *p == c) {
            return Err(TeachingError::DuplicateConcept(prev, j));
        }
        normalized.push(c);
    }
    let k = normalized.len();
    let n = num_elements + k;
    let mut edges = Vec::new();
    for j in 0..k {
        let xj = num_elements + j;
        for l in j + 1..k {
            edges.push((xj, num_elements + l));
        }
        for &e in &normalized[j] {
            edges.push((e, xj));
        }
    }
    let graph = Graph::new(n, &edges).expect("embedding graph");
    let pairs: Vec<(Vertex, usize)> = (0..k).map(|j| (num_elements + j, 1)).collect();
    let family =
        BallFamily::from_center_radius_pairs(&graph, &pairs).expect("embedding family");
    debug_assert_eq!(family.len(), k);
    let roles: Vec<EmbedRole> = (0..num_elements)
        .map(EmbedRole::Element)
        .chain((0..k).map(EmbedRole::Concept))
        .collect();
    Ok(Embedding { family, roles })
}

/// Renders conflicts with ball labels for diagnostics.
pub fn describe_conflicts(family: &BallFamily, conflicts: &[Conflict]) -> String {
    let mut out = String::new();
    for c in conflicts {
        let a = family.ball(c.first);
        let b = family.ball(c.second);
        let _ = writeln!(
            out,
            "conflict: ball ({}, {}) vs ball ({}, {})",
            a.center(),
            a.radius(),
            b.center(),
            b.radius()
        );
    }
    out
}

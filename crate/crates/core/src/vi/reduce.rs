//! Instance reduction: keep the separator and, per twin class, a bounded
//! number of components; intersect the surviving balls with the kept
//! vertices. Under the kept-twin hypothesis the intersections are genuine
//! balls of the reduced graph and biject with the original balls centered
//! among kept vertices — both facts are checked, not assumed.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::balls::{ball, BallFamily};
use crate::graph::Vertex;

use super::{Bounds, TwinClasses, ViError, ViWitness};

/// How many twin components to keep per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Retain {
    /// The instance-specific bound that provably preserves the teaching
    /// dimension (astronomically large: the reduction is usually a no-op).
    PaperBound,
    /// Heuristic cap; must be at least 3 (lifting needs two spare twins
    /// beyond the copy source). Reduced infeasibility is then inconclusive
    /// and triggers the documented fallback.
    Count(usize),
}

/// Maps a reduced instance back to its original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// New vertex id -> original vertex id.
    pub kept_old_ids: Vec<Vertex>,
    /// New ball id -> original ball id.
    pub ball_old_ids: Vec<usize>,
    /// Witness budget used on the original instance.
    pub p: usize,
    /// Separator in original vertex ids.
    pub x_old: Vec<Vertex>,
}

#[derive(Serialize, Deserialize)]
struct ProvenanceJson {
    kept_vertices: BTreeMap<String, Vertex>,
    ball_map: BTreeMap<String, String>,
    witness: WitnessJson,
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    p: usize,
    #[serde(rename = "X")]
    x: Vec<Vertex>,
}

impl Provenance {
    /// JSON sidecar: new-id -> old-id vertex table, canonical-label ball
    /// table, and the witness (p, X) in original ids.
    pub fn to_json(&self, reduced: &BallFamily, original: &BallFamily) -> String {
        let kept_vertices: BTreeMap<String, Vertex> = self
            .kept_old_ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (new.to_string(), old))
            .collect();
        let ball_map: BTreeMap<String, String> = self
            .ball_old_ids
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let (nc, nr) = reduced.ball(new).label();
                let (oc, or) = original.ball(old).label();
                (format!("{nc},{nr}"), format!("{oc},{or}"))
            })
            .collect();
        let doc = ProvenanceJson {
            kept_vertices,
            ball_map,
            witness: WitnessJson {
                p: self.p,
                x: self.x_old.clone(),
            },
        };
        serde_json::to_string_pretty(&doc).expect("provenance serialization")
    }

    pub fn from_json(
        input: &str,
        reduced: &BallFamily,
        original: &BallFamily,
    ) -> Result<Self, String> {
        let doc: ProvenanceJson = serde_json::from_str(input).map_err(|e| e.to_string())?;
        let mut kept_old_ids = vec![usize::MAX; doc.kept_vertices.len()];
        for (new, old) in &doc.kept_vertices {
            let idx: usize = new.parse().map_err(|_| format!("bad vertex key {new}"))?;
            if idx >= kept_old_ids.len() {
                return Err(format!("vertex key {new} out of range"));
            }
            kept_old_ids[idx] = *old;
        }
        let parse_label = |s: &str| -> Result<(usize, usize), String> {
            let (c, r) = s.split_once(',').ok_or_else(|| format!("bad label {s}"))?;
            Ok((
                c.trim().parse().map_err(|_| format!("bad label {s}"))?,
                r.trim().parse().map_err(|_| format!("bad label {s}"))?,
            ))
        };
        let mut ball_old_ids = vec![usize::MAX; doc.ball_map.len()];
        for (new_label, old_label) in &doc.ball_map {
            let (nc, nr) = parse_label(new_label)?;
            let (oc, or) = parse_label(old_label)?;
            let new_id = reduced
                .find_by_label(nc, nr)
                .ok_or_else(|| format!("no reduced ball ({nc}, {nr})"))?;
            let old_id = original
                .find_by_label(oc, or)
                .ok_or_else(|| format!("no original ball ({oc}, {or})"))?;
            ball_old_ids[new_id] = old_id;
        }
        if ball_old_ids.contains(&usize::MAX) || ball_old_ids.len() != reduced.len() {
            return Err("ball map does not cover the reduced family".into());
        }
        Ok(Provenance {
            kept_old_ids,
            ball_old_ids,
            p: doc.witness.p,
            x_old: doc.witness.x,
        })
    }
}

/// A reduced instance together with its provenance.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub family: BallFamily,
    pub witness: ViWitness,
    pub provenance: Provenance,
    /// Whether any component was actually dropped.
    pub was_cut: bool,
}

/// Keeps the separator plus, per twin class, the first `retain` components in
/// component order, and induces the family on the kept vertices.
pub fn reduce_instance(
    family: &BallFamily,
    witness: &ViWitness,
    classes: &TwinClasses,
    retain: &Retain,
    bounds: &Bounds,
) -> Result<Reduced, ViError> {
    let keep_of_class = |class_size: usize| -> usize {
        match retain {
            Retain::PaperBound => {
                if BigUint::from(class_size) <= bounds.f {
                    class_size
                } else {
                    // f fits in usize whenever it is smaller than a class size.
                    let digits = bounds.f.to_u64_digits();
                    digits.first().copied().unwrap_or(0) as usize
                }
            }
            Retain::Count(r) => class_size.min(*r),
        }
    };
    if let Retain::Count(r) = retain {
        if *r < 3 {
            return Err(ViError::RetainTooSmall(*r));
        }
    }
    let mut kept: Vec<Vertex> = witness.x().to_vec();
    let mut was_cut = false;
    for class in classes.classes() {
        let keep = keep_of_class(class.size());
        if keep < class.size() {
            was_cut = true;
        }
        for &comp in class.members.iter().take(keep) {
            kept.extend_from_slice(&witness.components()[comp]);
        }
    }
    kept.sort_unstable();
    let induced = induced_balls(family, witness, classes, &kept)?;
    let new_x: Vec<Vertex> = witness
        .x()
        .iter()
        .map(|&v| induced.kept_old_ids.binary_search(&v).unwrap())
        .collect();
    let reduced_witness = ViWitness::new(induced.family.graph(), witness.p(), new_x)
        .expect("kept components satisfy the original budget");
    Ok(Reduced {
        provenance: Provenance {
            kept_old_ids: induced.kept_old_ids,
            ball_old_ids: induced.ball_old_ids,
            p: witness.p(),
            x_old: witness.x().to_vec(),
        },
        family: induced.family,
        witness: reduced_witness,
        was_cut,
    })
}

/// Result of inducing a family on a kept vertex set.
#[derive(Debug)]
pub struct InducedBalls {
    /// The induced family over the renumbered subgraph.
    pub family: BallFamily,
    /// New ball id -> original ball id (the bijection onto original balls
    /// with a kept witness center).
    pub ball_old_ids: Vec<usize>,
    /// New vertex id -> original vertex id.
    pub kept_old_ids: Vec<Vertex>,
}

/// Intersects the family with `kept`, checking the hypothesis (separator
/// kept; every component fully kept or fully dropped; dropped components
/// have at least two kept twins) and that every induced set really is a ball
/// of the reduced graph.
pub fn induced_balls(
    family: &BallFamily,
    witness: &ViWitness,
    classes: &TwinClasses,
    kept: &[Vertex],
) -> Result<InducedBalls, ViError> {
    let g = family.graph();
    let mut kept_sorted = kept.to_vec();
    kept_sorted.sort_unstable();
    kept_sorted.dedup();
    let is_kept = |v: Vertex| kept_sorted.binary_search(&v).is_ok();
    if let Some(&missing) = witness.x().iter().find(|&&v| !is_kept(v)) {
        return Err(ViError::InducedHypothesisViolated {
            component: usize::MAX,
            reason: format!("separator vertex {missing} not kept"),
        });
    }
    let mut comp_fully_kept = vec![false; witness.components().len()];
    for (ci, comp) in witness.components().iter().enumerate() {
        let kept_count = comp.iter().filter(|&&v| is_kept(v)).count();
        if kept_count == comp.len() {
            comp_fully_kept[ci] = true;
        } else if kept_count != 0 {
            return Err(ViError::InducedHypothesisViolated {
                component: ci,
                reason: format!("component partially kept ({kept_count}/{})", comp.len()),
            });
        }
    }
    for (ci, comp_kept) in comp_fully_kept.iter().enumerate() {
        if *comp_kept {
            continue;
        }
        let class_id = classes.class_of_component(ci);
        let kept_twins = classes.classes()[class_id]
            .members
            .iter()
            .filter(|&&m| comp_fully_kept[m])
            .count();
        if kept_twins < 2 {
            return Err(ViError::InducedHypothesisViolated {
                component: ci,
                reason: format!("dropped component has only {kept_twins} kept twins"),
            });
        }
    }

    let (reduced_graph, kept_old_ids) = g.induced_subgraph(&kept_sorted);
    let new_id: HashMap<Vertex, Vertex> = kept_old_ids
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();

    // Original balls witnessed by a kept center, with the lexicographically
    // least kept witness.
    let mut set_index: HashMap<&[Vertex], usize> = HashMap::new();
    for (id, b) in family.balls().iter().enumerate() {
        set_index.insert(b.members(), id);
    }
    let mut witness_of_ball: BTreeMap<usize, (Vertex, usize)> = BTreeMap::new();
    for &u in &kept_old_ids {
        let dist = g.bfs_distances(u).unwrap();
        let ecc = dist.iter().flatten().copied().max().unwrap_or(0);
        for r in 0..=ecc + 1 {
            let members: Vec<Vertex> = (0..g.n())
                .filter(|&v| matches!(dist[v], Some(d) if d <= r))
                .collect();
            if let Some(&old_id) = set_index.get(members.as_slice()) {
                witness_of_ball.entry(old_id).or_insert((u, r));
            }
        }
    }

    // Induce, renumber, and check each set is a genuine reduced-graph ball.
    let mut seen_sets: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut pairs: Vec<(Vertex, usize)> = Vec::new();
    let mut pair_old_ids: Vec<(Vec<Vertex>, usize)> = Vec::new();
    for (&old_id, &(u, r)) in &witness_of_ball {
        let induced_set: Vec<Vertex> = family
            .ball(old_id)
            .members()
            .iter()
            .filter_map(|v| new_id.get(v).copied())
            .collect();
        let center = new_id[&u];
        let fresh = ball(&reduced_graph, center, r).expect("kept center");
        if fresh.members() != induced_set.as_slice() {
            return Err(ViError::InducedBallMismatch(format!(
                "ball ({}, {}) intersected with the kept set is not the ball of ({center}, {r}) in the reduced graph",
                family.ball(old_id).center(),
                family.ball(old_id).radius(),
            )));
        }
        if let Some(&other) = seen_sets.get(&induced_set) {
            return Err(ViError::InducedBallMismatch(format!(
                "balls {other} and {old_id} induce the same set; no bijection"
            )));
        }
        seen_sets.insert(induced_set.clone(), old_id);
        pairs.push((center, r));
        pair_old_ids.push((induced_set, old_id));
    }

    let reduced_family = if family.is_strict() {
        let strict = BallFamily::strict(&reduced_graph);
        if strict.len() != pair_old_ids.len() {
            return Err(ViError::InducedBallMismatch(format!(
                "induced family has {} balls but the reduced graph has {} balls",
                pair_old_ids.len(),
                strict.len()
            )));
        }
        strict
    } else {
        BallFamily::from_center_radius_pairs(&reduced_graph, &pairs)
            .expect("validated centers")
    };
    let by_set: HashMap<Vec<Vertex>, usize> = pair_old_ids.into_iter().collect();
    let mut ball_old_ids = Vec::with_capacity(reduced_family.len());
    for b in reduced_family.balls() {
        match by_set.get(b.members()) {
            Some(&old_id) => ball_old_ids.push(old_id),
            None => {
                return Err(ViError::InducedBallMismatch(format!(
                    "reduced ball ({}, {}) has no originating ball",
                    b.center(),
                    b.radius()
                )))
            }
        }
    }
    Ok(InducedBalls {
        family: reduced_family,
        ball_old_ids,
        kept_old_ids,
    })
}

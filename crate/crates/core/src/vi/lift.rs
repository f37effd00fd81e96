//! Lifts a compact solution of a reduced instance back to the original:
//! carried-over balls keep their teaching sets; balls centered in a dropped
//! component copy the teaching sets of a kept twin through the canonical
//! isomorphism. The copy source must come with a second interchangeable
//! kept twin (same teaching footprint) outside the 2-extended core; with the
//! provable retention bound such a pair always exists by pigeonhole, under
//! heuristic retention its absence is reported as lift-infeasible.

use std::collections::HashMap;

use crate::balls::{ball, BallFamily};
use crate::graph::Vertex;
use crate::teaching::{verify, TeachingError, TeachingMap};

use super::cores::cores;
use super::{twin_classes, Reduced, TwinClasses, ViError, ViWitness};

pub fn lift(
    family: &BallFamily,
    witness: &ViWitness,
    classes: &TwinClasses,
    reduced: &Reduced,
    map_reduced: &TeachingMap,
    s: u64,
) -> Result<TeachingMap, ViError> {
    let conflicts = verify(&reduced.family, map_reduced)?;
    if !conflicts.is_empty() {
        return Err(ViError::Teaching(TeachingError::InputHasConflicts(
            conflicts.len(),
        )));
    }
    let prov = &reduced.provenance;

    // Carried-over balls keep their teaching sets, translated to original ids.
    let mut assigned: Vec<Option<Vec<Vertex>>> = vec![None; family.len()];
    for (new_id, &old_id) in prov.ball_old_ids.iter().enumerate() {
        let translated: Vec<Vertex> = map_reduced
            .set(new_id)
            .iter()
            .map(|&v| prov.kept_old_ids[v])
            .collect();
        assigned[old_id] = Some(translated);
    }
    if assigned.iter().all(Option::is_some) {
        // Nothing was dropped; the reduced map carries over verbatim.
        let map = TeachingMap::new(assigned.into_iter().map(Option::unwrap).collect());
        return finish(family, map_reduced, map);
    }

    // Reduced-side structures for eligibility: the 2-extended core of the
    // reduced map, and the reduced twin classification.
    let classes_red = twin_classes(&reduced.family, &reduced.witness);
    let cores_red = cores(
        &reduced.family,
        map_reduced,
        &reduced.witness,
        &classes_red,
        s,
    );
    let kept_lookup: HashMap<Vertex, Vertex> = prov
        .kept_old_ids
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let comp_fully_kept: Vec<bool> = witness
        .components()
        .iter()
        .map(|comp| comp.iter().all(|v| kept_lookup.contains_key(v)))
        .collect();
    // Original component id -> reduced component id (for kept components).
    let reduced_comp_of = |orig_comp: usize| -> usize {
        let first_old = witness.components()[orig_comp][0];
        let first_new = kept_lookup[&first_old];
        classes_red
            .component_of(first_new)
            .expect("kept component vertex is outside the separator")
    };

    // Original balls grouped by the component of their canonical center.
    let mut centered: Vec<Vec<usize>> = vec![Vec::new(); witness.components().len()];
    for (id, b) in family.balls().iter().enumerate() {
        if let Some(ci) = classes.component_of(b.center()) {
            centered[ci].push(id);
        }
    }

    for (class_id, class) in classes.classes().iter().enumerate() {
        let dropped: Vec<usize> = class
            .members
            .iter()
            .copied()
            .filter(|&m| !comp_fully_kept[m])
            .collect();
        if dropped.is_empty() {
            continue;
        }
        let eligible: Vec<usize> = class
            .members
            .iter()
            .copied()
            .filter(|&m| comp_fully_kept[m] && !cores_red.ext2.contains(&reduced_comp_of(m)))
            .collect();
        let source = find_interchangeable_pair(reduced, map_reduced, &classes_red, &eligible, &reduced_comp_of)
            .ok_or(ViError::LiftInfeasible { class_id })?;

        for &h_c in &dropped {
            for &old_ball in &centered[h_c] {
                if assigned[old_ball].is_some() {
                    continue;
                }
                let b = family.ball(old_ball);
                let mirror_center = classes.translate(b.center(), source);
                let mirror =
                    ball(family.graph(), mirror_center, b.radius()).expect("valid center");
                let source_ball = family
                    .find_by_members(mirror.members())
                    .expect("twin condition provides the mirrored ball");
                let source_teach = assigned[source_ball]
                    .as_ref()
                    .expect("mirrored ball is carried over")
                    .clone();
                let copied: Vec<Vertex> = source_teach
                    .into_iter()
                    .map(|w| {
                        if classes.component_of(w) == Some(source) {
                            classes.translate(w, h_c)
                        } else {
                            w
                        }
                    })
                    .collect();
                assigned[old_ball] = Some(copied);
            }
        }
    }

    debug_assert!(assigned.iter().all(Option::is_some));
    let map = TeachingMap::new(
        assigned
            .into_iter()
            .map(|s| s.expect("every ball is carried over or copied"))
            .collect(),
    );
    finish(family, map_reduced, map)
}

fn finish(
    family: &BallFamily,
    map_reduced: &TeachingMap,
    map: TeachingMap,
) -> Result<TeachingMap, ViError> {
    let conflicts = verify(family, &map)?;
    if !conflicts.is_empty() {
        return Err(ViError::LiftProducedConflicts(conflicts.len()));
    }
    debug_assert!(map.dimension() <= map_reduced.dimension());
    Ok(map)
}

/// First component (in the fixed order) that forms an interchangeable pair
/// with a later eligible twin: mirrored balls carry identical teaching sets
/// outside the home components and isomorphic ones inside.
fn find_interchangeable_pair(
    reduced: &Reduced,
    map_reduced: &TeachingMap,
    classes_red: &TwinClasses,
    eligible_orig: &[usize],
    reduced_comp_of: &dyn Fn(usize) -> usize,
) -> Option<usize> {
    for (i, &a) in eligible_orig.iter().enumerate() {
        for &b in &eligible_orig[i + 1..] {
            if footprints_match(
                reduced,
                map_reduced,
                classes_red,
                reduced_comp_of(a),
                reduced_comp_of(b),
            ) {
                return Some(a);
            }
        }
    }
    None
}

fn footprints_match(
    reduced: &Reduced,
    map: &TeachingMap,
    classes: &TwinClasses,
    comp_a: usize,
    comp_b: usize,
) -> bool {
    let fam = &reduced.family;
    let g = fam.graph();
    for (id, b) in fam.balls().iter().enumerate() {
        let side = match classes.component_of(b.center()) {
            Some(c) if c == comp_a => (comp_a, comp_b),
            Some(c) if c == comp_b => (comp_b, comp_a),
            _ => continue,
        };
        let mirror_center = classes.translate(b.center(), side.1);
        let mirror = ball(g, mirror_center, b.radius()).expect("valid center");
        let other = match fam.find_by_members(mirror.members()) {
            Some(i) => i,
            None => return false,
        };
        let split = |ball_id: usize, home: usize| -> (Vec<Vertex>, Vec<Vertex>) {
            let mut inside = Vec::new();
            let mut outside = Vec::new();
            for &w in map.set(ball_id) {
                if classes.component_of(w) == Some(home) {
                    inside.push(w);
                } else {
                    outside.push(w);
                }
            }
            (inside, outside)
        };
        let (in_a, out_a) = split(id, side.0);
        let (in_b, out_b) = split(other, side.1);
        if out_a != out_b {
            return false;
        }
        let mut mapped: Vec<Vertex> = in_a.iter().map(|&w| classes.translate(w, side.1)).collect();
        mapped.sort_unstable();
        if mapped != in_b {
            return false;
        }
    }
    true
}

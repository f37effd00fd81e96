//! Core component sets of a teaching map and compactification. The core
//! collects, per taught vertex, the first s+1 twin components (in the fixed
//! component order) whose mirrored balls teach the corresponding orbit
//! vertex; two extension rounds close it under "teaching set points here
//! from a core-centered ball". A map is compact when vertices outside the
//! 2-extended core are taught only by balls centered in their own component.

use std::collections::BTreeSet;

use crate::balls::BallFamily;
use crate::graph::Vertex;
use crate::teaching::{verify, TeachingMap};

use super::blueprint::equivalent_balls;
use super::{perfect_classes, TwinClasses, ViError, ViWitness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cores {
    /// Dimension bound used to size the per-(ball, vertex) cores.
    pub s: u64,
    /// Component ids of the core.
    pub core: BTreeSet<usize>,
    /// 1-extended core (superset of `core`).
    pub ext1: BTreeSet<usize>,
    /// 2-extended core (superset of `ext1`).
    pub ext2: BTreeSet<usize>,
    /// The component order used throughout (ascending component id).
    pub order: Vec<usize>,
}

/// Per-(ball, taught vertex) core: the first `s + 1` members (component
/// order) of the taught vertex's twin class whose orbit counterpart is
/// taught by some ball perfectly equivalent to `ball_id`.
fn ball_vertex_core(
    map: &TeachingMap,
    ball_id: usize,
    x: Vertex,
    classes: &TwinClasses,
    equivalents: &[usize],
    s: u64,
) -> Vec<usize> {
    debug_assert!(map.set(ball_id).contains(&x));
    let (class_id, _) = classes.orbit_of(x).expect("taught vertex in component");
    let mut out = Vec::new();
    for &comp in &classes.classes()[class_id].members {
        let image = classes.translate(x, comp);
        let taught = equivalents.iter().any(|&b| map.set(b).contains(&image));
        if taught {
            out.push(comp);
            if out.len() == s as usize + 1 {
                break;
            }
        }
    }
    out
}

/// Computes the core and its two extensions for `map`.
pub fn cores(
    family: &BallFamily,
    map: &TeachingMap,
    witness: &ViWitness,
    classes: &TwinClasses,
    s: u64,
) -> Cores {
    let perfect = perfect_classes(family, map, witness, classes);
    let mut core: BTreeSet<usize> = BTreeSet::new();
    for ball_id in 0..family.len() {
        let center_comp = classes.component_of(family.ball(ball_id).center());
        let equivalents = equivalent_balls(family, ball_id, witness, classes, &perfect);
        for &x in map.set(ball_id) {
            let x_comp = match classes.component_of(x) {
                None => continue,
                Some(c) => c,
            };
            // Only teaching that points outside the ball's home component
            // seeds the core; a compact map's 2-extended core then consists
            // exactly of foreign-taught components.
            if center_comp == Some(x_comp) {
                continue;
            }
            core.extend(ball_vertex_core(map, ball_id, x, classes, &equivalents, s));
        }
    }
    let extend = |base: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = base.clone();
        for ball_id in 0..family.len() {
            let center = family.ball(ball_id).center();
            let centered_inside = match classes.component_of(center) {
                None => true, // separator-centered balls always count
                Some(h) => base.contains(&h),
            };
            if !centered_inside {
                continue;
            }
            for &x in map.set(ball_id) {
                if let Some(h) = classes.component_of(x) {
                    out.insert(h);
                }
            }
        }
        out
    };
    let ext1 = extend(&core);
    let ext2 = extend(&ext1);
    Cores {
        s,
        core,
        ext1,
        ext2,
        order: (0..witness.components().len()).collect(),
    }
}

/// True iff every vertex outside the 2-extended core is taught only by balls
/// centered in its own component.
pub fn is_compact(
    family: &BallFamily,
    map: &TeachingMap,
    classes: &TwinClasses,
    cores: &Cores,
) -> bool {
    violations(family, map, classes, cores).is_empty()
}

fn violations(
    family: &BallFamily,
    map: &TeachingMap,
    classes: &TwinClasses,
    cores: &Cores,
) -> Vec<(usize, Vertex)> {
    let mut out = Vec::new();
    for ball_id in 0..family.len() {
        let center_comp = classes.component_of(family.ball(ball_id).center());
        for &x in map.set(ball_id) {
            if let Some(h) = classes.component_of(x) {
                if !cores.ext2.contains(&h) && center_comp != Some(h) {
                    out.push((ball_id, x));
                }
            }
        }
    }
    out
}

/// Rewrites a verifying map into a compact verifying map of the same
/// dimension by repeatedly swapping an offending taught vertex for its orbit
/// counterpart in a core component; the first conflict-free swap is taken.
/// With teaching sets within the dimension bound `s`, a full core guarantees
/// such a swap exists, so failure to find one is surfaced as an error rather
/// than ignored.
pub fn compactify(
    family: &BallFamily,
    map: &TeachingMap,
    witness: &ViWitness,
    classes: &TwinClasses,
    s: u64,
) -> Result<TeachingMap, ViError> {
    let conflicts = verify(family, map)?;
    if !conflicts.is_empty() {
        return Err(ViError::Teaching(
            crate::teaching::TeachingError::InputHasConflicts(conflicts.len()),
        ));
    }
    let mut current = map.clone();
    let mut prev_violations = usize::MAX;
    loop {
        let crs = cores(family, &current, witness, classes, s);
        let offenders = violations(family, &current, classes, &crs);
        if offenders.is_empty() {
            break;
        }
        if offenders.len() >= prev_violations {
            return Err(ViError::CompactifyStalled(offenders.len()));
        }
        prev_violations = offenders.len();
        let (ball_id, x) = offenders[0];
        // A violating pair is never centered in the separator or the
        // 1-extended core; either would place x's component in ext2.
        debug_assert!(classes
            .component_of(family.ball(ball_id).center())
            .is_some_and(|h| !crs.ext1.contains(&h)));
        let perfect = perfect_classes(family, &current, witness, classes);
        let equivalents = equivalent_balls(family, ball_id, witness, classes, &perfect);
        let candidates =
            ball_vertex_core(&current, ball_id, x, classes, &equivalents, s);
        let mut swapped = false;
        for comp in candidates {
            let x_i = classes.translate(x, comp);
            if x_i == x {
                continue;
            }
            let mut trial = current.clone();
            let set = trial.set_mut(ball_id);
            set.retain(|&v| v != x);
            if !set.contains(&x_i) {
                set.push(x_i);
                set.sort_unstable();
            }
            if verify(family, &trial)?.is_empty() {
                current = trial;
                swapped = true;
                break;
            }
        }
        if !swapped {
            return Err(ViError::CompactifySwapFailed { ball_id, vertex: x });
        }
    }
    debug_assert_eq!(current.dimension().max(map.dimension()), map.dimension());
    Ok(current)
}

//! Partition of the separator components into twin-blocks: components
//! related by an isomorphism preserving internal edges, adjacency into the
//! separator, and ball presence in the family. Each class fixes a canonical
//! isomorphism from its representative to every member, so vertex orbits are
//! well defined and maps between two members compose through the
//! representative.

use std::collections::HashMap;

use crate::balls::BallFamily;
use crate::graph::Vertex;

use super::ViWitness;

/// One twin-block equivalence class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinClass {
    /// Component ids (indices into the witness component list), ascending;
    /// the first is the representative.
    pub members: Vec<usize>,
    /// Sorted vertices of the representative component; index into this list
    /// is the orbit position.
    rep_vertices: Vec<Vertex>,
    /// `isos[m][o]` = vertex of member `m` playing orbit position `o`; the
    /// lexicographically least valid bijection from the representative.
    isos: Vec<Vec<Vertex>>,
}

impl TwinClass {
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn orbit_count(&self) -> usize {
        self.rep_vertices.len()
    }

    /// All vertices of one orbit, in member order.
    pub fn orbit(&self, position: usize) -> Vec<Vertex> {
        self.isos.iter().map(|iso| iso[position]).collect()
    }

    /// Image of orbit `position` inside member `member_pos`.
    pub fn vertex_at(&self, member_pos: usize, position: usize) -> Vertex {
        self.isos[member_pos][position]
    }
}

/// Twin classification of all components, with vertex-level lookups.
#[derive(Debug, Clone)]
pub struct TwinClasses {
    classes: Vec<TwinClass>,
    component_of_vertex: Vec<Option<usize>>,
    class_of_component: Vec<usize>,
    member_pos_of_component: Vec<usize>,
    orbit_of_vertex: Vec<Option<usize>>,
}

impl TwinClasses {
    pub fn classes(&self) -> &[TwinClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Component id containing `v`, or `None` for separator vertices.
    pub fn component_of(&self, v: Vertex) -> Option<usize> {
        self.component_of_vertex[v]
    }

    pub fn class_of_component(&self, comp: usize) -> usize {
        self.class_of_component[comp]
    }

    pub fn member_pos_of_component(&self, comp: usize) -> usize {
        self.member_pos_of_component[comp]
    }

    /// `(class id, orbit position)` of `v`, or `None` for separator vertices.
    pub fn orbit_of(&self, v: Vertex) -> Option<(usize, usize)> {
        let comp = self.component_of_vertex[v]?;
        Some((self.class_of_component[comp], self.orbit_of_vertex[v].unwrap()))
    }

    /// Counterpart of `v` inside `target_comp`, which must be a member of
    /// `v`'s class; composes the canonical isomorphisms through the
    /// representative.
    pub fn translate(&self, v: Vertex, target_comp: usize) -> Vertex {
        let (class_id, orbit) = self.orbit_of(v).expect("separator vertices have no orbit");
        debug_assert_eq!(self.class_of_component[target_comp], class_id);
        let member_pos = self.member_pos_of_component[target_comp];
        self.classes[class_id].isos[member_pos][orbit]
    }
}

/// Classifies the witness components into twin-blocks with respect to the
/// family. Membership is decided by brute force over bijections after
/// bucketing by per-vertex signatures (internal degree, separator
/// neighborhood, ball presence per radius).
pub fn twin_classes(family: &BallFamily, witness: &ViWitness) -> TwinClasses {
    let g = family.graph();
    let n = g.n();
    debug_assert!(witness.matches(g));

    // Per-vertex ball-presence signature: whether the ball of each radius
    // around the vertex is a member set of the family. Radii beyond the
    // vertex eccentricity repeat the component ball, so padding to a common
    // length captures every radius.
    let mut set_index: HashMap<&[Vertex], usize> = HashMap::new();
    for (id, b) in family.balls().iter().enumerate() {
        set_index.insert(b.members(), id);
    }
    let max_ecc = (0..n)
        .map(|v| g.eccentricity(v).unwrap())
        .max()
        .unwrap_or(0);
    let sig_len = max_ecc + 2;
    let mut component_of_vertex = vec![None; n];
    for (ci, comp) in witness.components().iter().enumerate() {
        for &v in comp {
            component_of_vertex[v] = Some(ci);
        }
    }
    let mut ball_sig: Vec<Vec<bool>> = vec![Vec::new(); n];
    for v in 0..n {
        if component_of_vertex[v].is_none() {
            continue;
        }
        let dist = g.bfs_distances(v).unwrap();
        let mut sig = Vec::with_capacity(sig_len);
        for r in 0..sig_len {
            let members: Vec<Vertex> = (0..n)
                .filter(|&u| matches!(dist[u], Some(d) if d <= r))
                .collect();
            sig.push(set_index.contains_key(members.as_slice()));
        }
        ball_sig[v] = sig;
    }
    let x_neighborhood = |v: Vertex| -> Vec<bool> {
        witness.x().iter().map(|&u| g.has_edge(v, u)).collect()
    };

    // Per-vertex key: everything a canonical isomorphism must preserve
    // pointwise.
    let vertex_key = |v: Vertex, comp: &[Vertex]| -> (usize, Vec<bool>, Vec<bool>) {
        let internal_degree = g
            .neighbors(v)
            .iter()
            .filter(|&&u| comp.binary_search(&u).is_ok())
            .count();
        (internal_degree, x_neighborhood(v), ball_sig[v].clone())
    };

    // Bucket components by an order-insensitive signature before trying
    // bijections.
    let mut buckets: HashMap<Vec<(usize, Vec<bool>, Vec<bool>)>, Vec<usize>> = HashMap::new();
    let comps = witness.components();
    for (ci, comp) in comps.iter().enumerate() {
        let mut sig: Vec<_> = comp.iter().map(|&v| vertex_key(v, comp)).collect();
        sig.sort();
        buckets.entry(sig).or_default().push(ci);
    }

    let mut classes: Vec<TwinClass> = Vec::new();
    let mut class_of_component = vec![usize::MAX; comps.len()];
    let mut member_pos_of_component = vec![usize::MAX; comps.len()];
    let mut bucket_list: Vec<Vec<usize>> = buckets.into_values().collect();
    for b in &mut bucket_list {
        b.sort_unstable();
    }
    bucket_list.sort();
    for bucket in bucket_list {
        // Within a bucket, match each component against established class
        // representatives; signature equality is necessary but not
        // sufficient, so a failed match opens a new class.
        let mut local_classes: Vec<usize> = Vec::new();
        for &ci in &bucket {
            let comp = &comps[ci];
            let mut placed = false;
            for &class_id in &local_classes {
                let rep_vertices = classes[class_id].rep_vertices.clone();
                if let Some(iso) =
                    find_lex_least_iso(family, witness, &rep_vertices, comp, &ball_sig)
                {
                    let member_pos = classes[class_id].members.len();
                    classes[class_id].members.push(ci);
                    classes[class_id].isos.push(iso);
                    class_of_component[ci] = class_id;
                    member_pos_of_component[ci] = member_pos;
                    placed = true;
                    break;
                }
            }
            if !placed {
                let class_id = classes.len();
                classes.push(TwinClass {
                    members: vec![ci],
                    rep_vertices: comp.clone(),
                    isos: vec![comp.clone()],
                });
                class_of_component[ci] = class_id;
                member_pos_of_component[ci] = 0;
                local_classes.push(class_id);
            }
        }
    }
    classes.sort_by_key(|c| c.members[0]);
    for (new_id, class) in classes.iter().enumerate() {
        for (pos, &ci) in class.members.iter().enumerate() {
            class_of_component[ci] = new_id;
            member_pos_of_component[ci] = pos;
        }
    }

    let mut orbit_of_vertex = vec![None; n];
    for class in &classes {
        for iso in &class.isos {
            for (orbit, &v) in iso.iter().enumerate() {
                orbit_of_vertex[v] = Some(orbit);
            }
        }
    }

    TwinClasses {
        classes,
        component_of_vertex,
        class_of_component,
        member_pos_of_component,
        orbit_of_vertex,
    }
}

/// Lexicographically least bijection from `rep` (sorted) onto `cand` that
/// preserves internal adjacency, separator adjacency, and per-radius ball
/// presence, or `None` when the components are not twins.
fn find_lex_least_iso(
    family: &BallFamily,
    witness: &ViWitness,
    rep: &[Vertex],
    cand: &[Vertex],
    ball_sig: &[Vec<bool>],
) -> Option<Vec<Vertex>> {
    if rep.len() != cand.len() {
        return None;
    }
    let g = family.graph();
    let compatible = |a: Vertex, b: Vertex| -> bool {
        if ball_sig[a] != ball_sig[b] {
            return false;
        }
        witness.x().iter().all(|&u| g.has_edge(a, u) == g.has_edge(b, u))
    };
    let mut image: Vec<Option<Vertex>> = vec![None; rep.len()];
    let mut used = vec![false; cand.len()];

    fn assign(
        g: &crate::graph::Graph,
        rep: &[Vertex],
        cand: &[Vertex],
        compatible: &dyn Fn(Vertex, Vertex) -> bool,
        image: &mut Vec<Option<Vertex>>,
        used: &mut Vec<bool>,
        pos: usize,
    ) -> bool {
        if pos == rep.len() {
            return true;
        }
        for ci in 0..cand.len() {
            if used[ci] || !compatible(rep[pos], cand[ci]) {
                continue;
            }
            // Internal adjacency must agree with all earlier assignments.
            let consistent = (0..pos).all(|prev| {
                let e1 = g.has_edge(rep[pos], rep[prev]);
                let e2 = g.has_edge(cand[ci], image[prev].unwrap());
                e1 == e2
            });
            if !consistent {
                continue;
            }
            image[pos] = Some(cand[ci]);
            used[ci] = true;
            if assign(g, rep, cand, compatible, image, used, pos + 1) {
                return true;
            }
            image[pos] = None;
            used[ci] = false;
        }
        false
    }

    if assign(g, rep, cand, &compatible, &mut image, &mut used, 0) {
        Some(image.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

//! NAE-Integer-3-SAT to teaching instances parameterized by the variable
//! count: one path of length d per variable, two hub vertices per clause
//! reaching the paths through long connector paths, and per variable a
//! vertex whose ball covers everything except that variable's path. The
//! family holds the whole vertex set, the per-variable balls, and two balls
//! per clause whose radii encode the clause thresholds.

use std::collections::BTreeMap;

use crate::balls::BallFamily;
use crate::graph::{FormatError, Graph, Vertex};
use crate::teaching::{verify, TeachingMap};

use super::sat3::{GeneratedInstance, ReductionError};

/// One clause: three (variable, threshold) inequalities `x <= c_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaeClause {
    pub terms: [(usize, usize); 3],
}

impl NaeClause {
    /// Number of satisfied inequalities under `sigma` (values in 1..=d).
    fn satisfied_count(&self, sigma: &[usize]) -> usize {
        self.terms
            .iter()
            .filter(|&&(var, thr)| sigma[var] <= thr)
            .count()
    }

    /// NAE: exactly one or two of the three inequalities hold.
    pub fn nae_satisfied(&self, sigma: &[usize]) -> bool {
        matches!(self.satisfied_count(sigma), 1 | 2)
    }
}

/// A conjunction of NAE clauses over integer variables ranging in 1..=d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    pub d: usize,
    pub num_vars: usize,
    pub clauses: Vec<NaeClause>,
}

impl NaeFormula {
    /// Validates domain bound, thresholds, and that each clause names three
    /// distinct variables (the construction wires three distinct paths).
    pub fn new(d: usize, num_vars: usize, clauses: Vec<NaeClause>) -> Result<Self, ReductionError> {
        if d == 0 {
            return Err(ReductionError::MalformedClause(0, "domain bound is zero".into()));
        }
        for (k, clause) in clauses.iter().enumerate() {
            let [a, b, c] = clause.terms;
            if a.0 == b.0 || a.0 == c.0 || b.0 == c.0 {
                return Err(ReductionError::MalformedClause(
                    k,
                    "clause variables must be distinct".into(),
                ));
            }
            for (var, thr) in clause.terms {
                if var >= num_vars {
                    return Err(ReductionError::MalformedClause(
                        k,
                        format!("variable {var} out of range"),
                    ));
                }
                if thr == 0 || thr > d {
                    return Err(ReductionError::MalformedClause(
                        k,
                        format!("threshold {thr} outside 1..={d}"),
                    ));
                }
            }
        }
        Ok(NaeFormula { d, num_vars, clauses })
    }

    pub fn nae_satisfied_by(&self, sigma: &[usize]) -> Result<bool, ReductionError> {
        if sigma.len() != self.num_vars {
            return Err(ReductionError::AssignmentLength {
                expected: self.num_vars,
                found: sigma.len(),
            });
        }
        for (k, clause) in self.clauses.iter().enumerate() {
            for (var, _) in clause.terms {
                if sigma[var] == 0 || sigma[var] > self.d {
                    return Err(ReductionError::MalformedClause(
                        k,
                        format!("assignment value {} outside 1..={}", sigma[var], self.d),
                    ));
                }
            }
        }
        Ok(self.clauses.iter().all(|c| c.nae_satisfied(sigma)))
    }

    /// Parses the text format: first content line `d`, then one clause per
    /// line as `x c_x y c_y z c_z` with 0-indexed variables. The variable
    /// count is the largest mentioned variable plus one.
    pub fn from_text(input: &str) -> Result<Self, FormatError> {
        let mut d: Option<usize> = None;
        let mut raw_clauses: Vec<(usize, [(usize, usize); 3])> = Vec::new();
        let mut num_vars = 0;
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if d.is_none() {
                d = Some(
                    line.parse()
                        .map_err(|_| FormatError::new(lineno, format!("bad domain bound `{line}`")))?,
                );
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(FormatError::new(
                    lineno,
                    format!("expected `x c_x y c_y z c_z`, found {} fields", fields.len()),
                ));
            }
            let mut nums = [0usize; 6];
            for (i, f) in fields.iter().enumerate() {
                nums[i] = f
                    .parse()
                    .map_err(|_| FormatError::new(lineno, format!("bad integer `{f}`")))?;
            }
            let terms = [(nums[0], nums[1]), (nums[2], nums[3]), (nums[4], nums[5])];
            for (var, _) in terms {
                num_vars = num_vars.max(var + 1);
            }
            raw_clauses.push((lineno, terms));
        }
        let d = d.ok_or_else(|| FormatError::new(1, "missing domain bound line"))?;
        let mut clauses = Vec::with_capacity(raw_clauses.len());
        for (lineno, terms) in raw_clauses {
            let clause = NaeClause { terms };
            NaeFormula::new(d, num_vars, vec![clause])
                .map_err(|e| FormatError::new(lineno, e.to_string()))?;
            clauses.push(clause);
        }
        NaeFormula::new(d, num_vars, clauses).map_err(|e| FormatError::new(1, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.d);
        for c in &self.clauses {
            let [a, b, z] = c.terms;
            let _ = writeln!(out, "{} {} {} {} {} {}", a.0, a.1, b.0, b.1, z.0, z.1);
        }
        out
    }
}

/// Exhaustive NAE-satisfiability check; guarded to at most 2^20 assignments.
pub fn nae_brute(psi: &NaeFormula) -> Result<Option<Vec<usize>>, ReductionError> {
    let combos = (psi.d as u128).checked_pow(psi.num_vars as u32);
    match combos {
        Some(c) if c <= 1 << 20 => {}
        _ => {
            return Err(ReductionError::SizeGuard(format!(
                "{}^{} assignments",
                psi.d, psi.num_vars
            )))
        }
    }
    let mut sigma = vec![1usize; psi.num_vars];
    loop {
        if psi.nae_satisfied_by(&sigma)? {
            return Ok(Some(sigma));
        }
        // Odometer increment over 1..=d per position.
        let mut pos = 0;
        loop {
            if pos == psi.num_vars {
                return Ok(None);
            }
            if sigma[pos] < psi.d {
                sigma[pos] += 1;
                break;
            }
            sigma[pos] = 1;
            pos += 1;
        }
    }
}

/// The generated instance with its bookkeeping: path vertices per variable,
/// hub vertices per clause, and the clause terms in wiring order (ascending
/// threshold).
#[derive(Debug, Clone)]
pub struct NaeInstance {
    pub instance: GeneratedInstance,
    pub formula: NaeFormula,
    /// Per variable, the ids of x_1..x_d.
    pub paths: Vec<Vec<Vertex>>,
    /// Per variable, the covering-ball center f_x.
    pub f_vertices: Vec<Vertex>,
    /// Per clause, the hub vertices (c, c').
    pub hubs: Vec<(Vertex, Vertex)>,
    /// Per clause, terms sorted by (threshold, variable) as wired.
    pub sorted_terms: Vec<[(usize, usize); 3]>,
    /// Per clause, the radii (r_c, r'_c').
    pub clause_radii: Vec<(usize, usize)>,
    /// Canonical label of the whole-graph ball.
    pub whole_label: (Vertex, usize),
}

impl NaeInstance {
    pub fn k(&self) -> usize {
        self.instance.k
    }

    fn whole_ball_id(&self) -> usize {
        self.instance
            .family
            .find_by_label(self.whole_label.0, self.whole_label.1)
            .expect("whole-graph ball present")
    }
}

/// Builds the teaching instance for `psi` with target dimension |variables|.
pub fn gen_nae(psi: &NaeFormula) -> Result<NaeInstance, ReductionError> {
    let d = psi.d;
    if psi.num_vars < 2 {
        return Err(ReductionError::StructuralViolation(
            "at least two variables are needed for a connected instance".into(),
        ));
    }
    let mut roles: Vec<String> = Vec::new();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let add_vertex = |roles: &mut Vec<String>, role: String| -> Vertex {
        roles.push(role);
        roles.len() - 1
    };

    // Variable paths x_1..x_d.
    let mut paths: Vec<Vec<Vertex>> = Vec::with_capacity(psi.num_vars);
    for v in 0..psi.num_vars {
        let mut path = Vec::with_capacity(d);
        for j in 1..=d {
            let id = add_vertex(&mut roles, format!("x{v}_{j}"));
            if j > 1 {
                edges.push((id - 1, id));
            }
            path.push(id);
        }
        paths.push(path);
    }

    // Connects `from` and `to` by a fresh path with `len` edges.
    let connect = |roles: &mut Vec<String>,
                   edges: &mut Vec<(Vertex, Vertex)>,
                   from: Vertex,
                   to: Vertex,
                   len: usize,
                   tag: &str| {
        debug_assert!(len >= 1);
        let mut prev = from;
        for t in 1..len {
            let id = {
                roles.push(format!("{tag}:{t}"));
                roles.len() - 1
            };
            edges.push((prev, id));
            prev = id;
        }
        edges.push((prev, to));
    };

    let mut hubs = Vec::with_capacity(psi.clauses.len());
    let mut sorted_terms = Vec::with_capacity(psi.clauses.len());
    let mut clause_radii = Vec::with_capacity(psi.clauses.len());
    for (k, clause) in psi.clauses.iter().enumerate() {
        let mut terms = clause.terms;
        terms.sort_by_key(|&(var, thr)| (thr, var));
        let [(x, cx), (y, cy), (z, cz)] = terms;
        let c = add_vertex(&mut roles, format!("c{k}"));
        let cp = add_vertex(&mut roles, format!("cp{k}"));
        // Hub-to-endpoint connectors; lengths stagger by the threshold gaps
        // so one radius cuts each path at its own threshold.
        connect(&mut roles, &mut edges, c, paths[x][d - 1], 4 * d, &format!("c{k}>x{x}d"));
        connect(
            &mut roles,
            &mut edges,
            c,
            paths[y][d - 1],
            4 * d + cy - cx,
            &format!("c{k}>x{y}d"),
        );
        connect(
            &mut roles,
            &mut edges,
            c,
            paths[z][d - 1],
            4 * d + cz - cx,
            &format!("c{k}>x{z}d"),
        );
        connect(
            &mut roles,
            &mut edges,
            cp,
            paths[x][0],
            4 * d + cz - cx,
            &format!("cp{k}>x{x}1"),
        );
        connect(
            &mut roles,
            &mut edges,
            cp,
            paths[y][0],
            4 * d + cz - cy,
            &format!("cp{k}>x{y}1"),
        );
        connect(&mut roles, &mut edges, cp, paths[z][0], 4 * d, &format!("cp{k}>x{z}1"));
        // Fillers to every variable not in the clause.
        for q in 0..psi.num_vars {
            if q == x || q == y || q == z {
                continue;
            }
            connect(&mut roles, &mut edges, c, paths[q][0], 3 * d, &format!("c{k}>x{q}1"));
            connect(&mut roles, &mut edges, cp, paths[q][0], 3 * d, &format!("cp{k}>x{q}1"));
        }
        hubs.push((c, cp));
        sorted_terms.push(terms);
        clause_radii.push((5 * d - cx - 1, 4 * d + cz - 1));
    }

    // Covering vertices: f_x reaches everything built so far except its own
    // path, each through a fresh path of length 6d; the f's form a clique.
    let pre_f_count = roles.len();
    let mut f_vertices = Vec::with_capacity(psi.num_vars);
    for v in 0..psi.num_vars {
        f_vertices.push(add_vertex(&mut roles, format!("f{v}")));
    }
    for v in 0..psi.num_vars {
        for u in 0..pre_f_count {
            if paths[v].contains(&u) {
                continue;
            }
            connect(
                &mut roles,
                &mut edges,
                f_vertices[v],
                u,
                6 * d,
                &format!("f{v}>v{u}"),
            );
        }
        for w in v + 1..psi.num_vars {
            edges.push((f_vertices[v], f_vertices[w]));
        }
    }

    let graph = Graph::new(roles.len(), &edges)
        .map_err(|e| ReductionError::StructuralViolation(e.to_string()))?;
    if graph.components().len() != 1 {
        return Err(ReductionError::StructuralViolation(
            "generated graph is disconnected".into(),
        ));
    }
    let whole_radius = graph
        .eccentricity(0)
        .map_err(|e| ReductionError::StructuralViolation(e.to_string()))?;
    let mut pairs: Vec<(Vertex, usize)> = vec![(0, whole_radius)];
    for v in 0..psi.num_vars {
        pairs.push((f_vertices[v], 6 * d));
    }
    for (k, &(c, cp)) in hubs.iter().enumerate() {
        pairs.push((c, clause_radii[k].0));
        pairs.push((cp, clause_radii[k].1));
    }
    let family = BallFamily::from_center_radius_pairs(&graph, &pairs)
        .map_err(|e| ReductionError::StructuralViolation(e.to_string()))?;
    if family.len() != 1 + psi.num_vars + 2 * psi.clauses.len() {
        return Err(ReductionError::StructuralViolation(format!(
            "family collapsed to {} balls",
            family.len()
        )));
    }
    let radii: BTreeMap<String, usize> = hubs
        .iter()
        .enumerate()
        .flat_map(|(k, _)| {
            [
                (format!("c{k}"), clause_radii[k].0),
                (format!("cp{k}"), clause_radii[k].1),
            ]
        })
        .collect();
    Ok(NaeInstance {
        instance: GeneratedInstance {
            family,
            k: psi.num_vars,
            roles,
            radii,
        },
        formula: psi.clone(),
        paths,
        f_vertices,
        hubs,
        sorted_terms,
        clause_radii,
        whole_label: (0, whole_radius),
    })
}

/// The explicit dimension-k teaching map for an NAE-satisfying assignment:
/// the whole-graph ball teaches the assigned path vertex of each variable,
/// every clause ball teaches its own hub, and each covering ball teaches its
/// center plus the first vertex of every other variable path.
pub fn nae_witness_map(inst: &NaeInstance, sigma: &[usize]) -> Result<TeachingMap, ReductionError> {
    let psi = &inst.formula;
    if sigma.len() != psi.num_vars {
        return Err(ReductionError::AssignmentLength {
            expected: psi.num_vars,
            found: sigma.len(),
        });
    }
    for (k, clause) in psi.clauses.iter().enumerate() {
        for (var, _) in clause.terms {
            if sigma[var] == 0 || sigma[var] > psi.d {
                return Err(ReductionError::MalformedClause(
                    k,
                    format!("assignment value {} outside 1..={}", sigma[var], psi.d),
                ));
            }
        }
        if !clause.nae_satisfied(sigma) {
            return Err(ReductionError::NotNaeSatisfying(k));
        }
    }
    let family = &inst.instance.family;
    let mut sets = vec![Vec::new(); family.len()];
    let whole: Vec<Vertex> = (0..psi.num_vars)
        .map(|v| inst.paths[v][sigma[v] - 1])
        .collect();
    sets[inst.whole_ball_id()] = whole;
    for v in 0..psi.num_vars {
        let id = family
            .find_by_label(inst.f_vertices[v], 6 * psi.d)
            .expect("covering ball present");
        let mut teach = vec![inst.f_vertices[v]];
        for q in 0..psi.num_vars {
            if q != v {
                teach.push(inst.paths[q][0]);
            }
        }
        sets[id] = teach;
    }
    for (k, &(c, cp)) in inst.hubs.iter().enumerate() {
        let id = family
            .find_by_label(c, inst.clause_radii[k].0)
            .expect("clause ball present");
        sets[id] = vec![c];
        let id = family
            .find_by_label(cp, inst.clause_radii[k].1)
            .expect("clause ball present");
        sets[id] = vec![cp];
    }
    Ok(TeachingMap::new(sets))
}

/// Reads the assignment encoded in a verifying dimension-k map: the
/// whole-graph teaching set holds exactly one vertex per variable path, and
/// its index is the variable's value.
pub fn extract_assignment_nae(
    inst: &NaeInstance,
    map: &TeachingMap,
) -> Result<Vec<usize>, ReductionError> {
    let family = &inst.instance.family;
    let conflicts =
        verify(family, map).map_err(|e| ReductionError::StructuralViolation(e.to_string()))?;
    if !conflicts.is_empty() {
        return Err(ReductionError::MapDoesNotVerify(conflicts.len()));
    }
    if map.dimension() > inst.k() {
        return Err(ReductionError::DimensionTooLarge {
            target: inst.k(),
            found: map.dimension(),
        });
    }
    let teach = map.set(inst.whole_ball_id());
    let mut sigma = Vec::with_capacity(inst.formula.num_vars);
    for (v, path) in inst.paths.iter().enumerate() {
        let hits: Vec<usize> = path
            .iter()
            .enumerate()
            .filter(|&(_, x)| teach.contains(x))
            .map(|(j, _)| j + 1)
            .collect();
        match hits.as_slice() {
            [j] => sigma.push(*j),
            [] => {
                return Err(ReductionError::StructuralViolation(format!(
                    "whole-graph teaching set misses variable path {v}"
                )))
            }
            _ => {
                return Err(ReductionError::StructuralViolation(format!(
                    "whole-graph teaching set hits variable path {v} more than once"
                )))
            }
        }
    }
    if !inst.formula.nae_satisfied_by(&sigma)? {
        return Err(ReductionError::StructuralViolation(
            "extracted assignment is not NAE-satisfying".into(),
        ));
    }
    Ok(sigma)
}

/// Structural facts checked on a generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeStructureReport {
    /// Vertices whose deletion was checked to leave an acyclic graph:
    /// both path endpoints and the covering vertex, per variable.
    pub fvs_witness: Vec<Vertex>,
    pub family_size: usize,
    pub vertices: usize,
}

/// Verifies the structural claims of the construction: deleting the path
/// endpoints and covering vertices leaves an acyclic graph whose only
/// branching vertices sit on hub connectors or variable paths (never on
/// covering-path legs); the family size and clause radii match their
/// formulas; each clause ball cuts each of its variable paths exactly at the
/// threshold and swallows all other paths; each covering ball is the
/// complement of its variable path.
pub fn structural_checks_nae(inst: &NaeInstance) -> Result<NaeStructureReport, ReductionError> {
    let g = inst.instance.graph();
    let psi = &inst.formula;
    let fail = |msg: String| Err(ReductionError::StructuralViolation(msg));

    let mut deleted: Vec<Vertex> = Vec::new();
    for v in 0..psi.num_vars {
        deleted.push(inst.paths[v][0]);
        deleted.push(*inst.paths[v].last().unwrap());
        deleted.push(inst.f_vertices[v]);
    }
    deleted.sort_unstable();
    deleted.dedup();
    let kept: Vec<Vertex> = (0..g.n()).filter(|v| !deleted.contains(v)).collect();
    let (rest, rest_old) = g.induced_subgraph(&kept);
    if !rest.is_acyclic() {
        return fail("deleting path endpoints and covering vertices leaves a cycle".into());
    }
    // Branching vertices of the remainder must lie on spines: hubs,
    // variable-path internals, or hub connectors. Covering-path legs are
    // forbidden.
    for v in 0..rest.n() {
        if rest.degree(v) >= 3 {
            let role = &inst.instance.roles[rest_old[v]];
            let on_spine = role.starts_with('c') || role.starts_with('x');
            if !on_spine {
                return fail(format!("vertex with role {role} branches off the spines"));
            }
        }
    }
    if inst.instance.family.len() != 1 + psi.num_vars + 2 * psi.clauses.len() {
        return fail(format!(
            "family has {} balls, expected {}",
            inst.instance.family.len(),
            1 + psi.num_vars + 2 * psi.clauses.len()
        ));
    }
    let family = &inst.instance.family;
    for (k, terms) in inst.sorted_terms.iter().enumerate() {
        let [(_, cx), (_, _), (_, cz)] = *terms;
        let (rc, rp) = inst.clause_radii[k];
        if rc != 5 * psi.d - cx - 1 || rp != 4 * psi.d + cz - 1 {
            return fail(format!("clause {k} radii ({rc}, {rp}) off the formulas"));
        }
        let (c, cp) = inst.hubs[k];
        let cball = family.ball(family.find_by_label(c, rc).expect("clause ball"));
        let cpball = family.ball(family.find_by_label(cp, rp).expect("clause ball"));
        let in_clause: Vec<usize> = terms.iter().map(|&(var, _)| var).collect();
        for &(var, thr) in terms {
            for (j, &x) in inst.paths[var].iter().enumerate() {
                let idx = j + 1;
                if cball.contains(x) != (idx > thr) {
                    return fail(format!(
                        "clause {k} ball around the low hub misreads path {var} at index {idx}"
                    ));
                }
                if cpball.contains(x) != (idx <= thr) {
                    return fail(format!(
                        "clause {k} ball around the high hub misreads path {var} at index {idx}"
                    ));
                }
            }
        }
        for q in 0..psi.num_vars {
            if in_clause.contains(&q) {
                continue;
            }
            if !inst.paths[q].iter().all(|&x| cball.contains(x) && cpball.contains(x)) {
                return fail(format!("clause {k} balls do not swallow path {q}"));
            }
        }
    }
    for v in 0..psi.num_vars {
        let id = family
            .find_by_label(inst.f_vertices[v], 6 * psi.d)
            .expect("covering ball");
        let ball = family.ball(id);
        let expected: Vec<Vertex> = (0..g.n()).filter(|u| !inst.paths[v].contains(u)).collect();
        if ball.members() != expected.as_slice() {
            return fail(format!("covering ball {v} is not the path complement"));
        }
    }
    let whole = family.ball(inst.whole_ball_id());
    if whole.len() != g.n() {
        return fail("whole-graph ball does not cover the graph".into());
    }
    Ok(NaeStructureReport {
        fvs_witness: deleted,
        family_size: family.len(),
        vertices: g.n(),
    })
}

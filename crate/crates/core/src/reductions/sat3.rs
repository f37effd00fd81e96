//! 3-SAT to strict teaching instances on split graphs with target dimension
//! two: per-variable and per-clause force-gadgets, literal attachments onto
//! the true/false vertex pair, biclique wiring, and a universal vertex. A
//! satisfying assignment yields an explicit dimension-2 teaching map, and any
//! dimension-2 map pins down a satisfying assignment through the forced
//! gadget teaching sets.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::balls::{ball, BallFamily};
use crate::graph::{FormatError, Graph, Vertex};
use crate::teaching::{verify, TeachingMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("malformed clause {0}: {1}")]
    MalformedClause(usize, String),
    #[error("assignment has {found} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment does not satisfy clause {0}")]
    UnsatisfyingAssignment(usize),
    #[error("assignment does not NAE-satisfy clause {0}")]
    NotNaeSatisfying(usize),
    #[error("map does not verify on the generated instance ({0} conflicts)")]
    MapDoesNotVerify(usize),
    #[error("map dimension {found} exceeds the target {target}")]
    DimensionTooLarge { target: usize, found: usize },
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("instance too large for brute force: {0}")]
    SizeGuard(String),
}

/// A literal: variable id plus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, negated: true }
    }

    pub fn satisfied_by(&self, value: bool) -> bool {
        value != self.negated
    }
}

/// CNF formula with exactly three literals per clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Lit; 3]>) -> Result<Self, ReductionError> {
        for (k, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(ReductionError::MalformedClause(
                        k,
                        format!("variable {} out of range", lit.var),
                    ));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> Result<bool, ReductionError> {
        if assignment.len() != self.num_vars {
            return Err(ReductionError::AssignmentLength {
                expected: self.num_vars,
                found: assignment.len(),
            });
        }
        Ok(self
            .clauses
            .iter()
            .all(|c| c.iter().any(|l| l.satisfied_by(assignment[l.var]))))
    }

    /// Parses DIMACS CNF, requiring exactly three literals per clause and one
    /// zero-terminated clause per line.
    pub fn from_dimacs(input: &str) -> Result<Self, FormatError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<[Lit; 3]> = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                if header.is_some() {
                    return Err(FormatError::new(lineno, "duplicate problem line"));
                }
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 3 || fields[0] != "cnf" {
                    return Err(FormatError::new(lineno, "expected `p cnf <vars> <clauses>`"));
                }
                let v = fields[1]
                    .parse()
                    .map_err(|_| FormatError::new(lineno, "bad variable count"))?;
                let c = fields[2]
                    .parse()
                    .map_err(|_| FormatError::new(lineno, "bad clause count"))?;
                header = Some((v, c));
                continue;
            }
            let (num_vars, _) =
                header.ok_or_else(|| FormatError::new(lineno, "clause before problem line"))?;
            let mut lits = Vec::new();
            let mut terminated = false;
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| FormatError::new(lineno, format!("bad literal `{tok}`")))?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                let var = v.unsigned_abs() as usize - 1;
                if var >= num_vars {
                    return Err(FormatError::new(
                        lineno,
                        format!("variable {} out of range", var + 1),
                    ));
                }
                lits.push(Lit {
                    var,
                    negated: v < 0,
                });
            }
            if !terminated {
                return Err(FormatError::new(lineno, "clause not zero-terminated"));
            }
            if lits.len() != 3 {
                return Err(FormatError::new(
                    lineno,
                    format!("expected exactly 3 literals, found {}", lits.len()),
                ));
            }
            clauses.push([lits[0], lits[1], lits[2]]);
        }
        let (num_vars, declared) =
            header.ok_or_else(|| FormatError::new(1, "missing problem line"))?;
        if clauses.len() != declared {
            return Err(FormatError::new(
                1,
                format!("declared {declared} clauses, found {}", clauses.len()),
            ));
        }
        Ok(CnfFormula { num_vars, clauses })
    }
}

/// Exhaustive satisfiability check; guarded to at most 2^20 assignments.
pub fn sat3_brute(phi: &CnfFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    if phi.num_vars > 20 {
        return Err(ReductionError::SizeGuard(format!(
            "2^{} assignments",
            phi.num_vars
        )));
    }
    for mask in 0u64..(1u64 << phi.num_vars) {
        let assignment: Vec<bool> = (0..phi.num_vars).map(|i| mask & (1 << i) != 0).collect();
        if phi.satisfied_by(&assignment).unwrap() {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// A generated teaching instance: the family (owning its graph), the target
/// dimension, and per-vertex role labels.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub family: BallFamily,
    pub k: usize,
    /// Role label of each vertex; labels are unique.
    pub roles: Vec<String>,
    /// Clause-ball radii, keyed by the clause hub's role label (empty for
    /// instances whose family is strict).
    pub radii: BTreeMap<String, usize>,
}

impl GeneratedInstance {
    pub fn graph(&self) -> &Graph {
        self.family.graph()
    }

    pub fn vertex_by_role(&self, role: &str) -> Option<Vertex> {
        self.roles.iter().position(|r| r == role)
    }

    /// JSON sidecar with per-vertex roles, the target dimension, and radii.
    pub fn roles_json(&self) -> String {
        let roles: BTreeMap<String, String> = self
            .roles
            .iter()
            .enumerate()
            .map(|(v, r)| (v.to_string(), r.clone()))
            .collect();
        let doc = serde_json::json!({
            "k": self.k,
            "roles": roles,
            "radii": self.radii,
        });
        serde_json::to_string_pretty(&doc).expect("roles serialization")
    }
}

/// The split-graph instance generated from a 3-CNF formula.
#[derive(Debug, Clone)]
pub struct Sat3Instance {
    pub instance: GeneratedInstance,
    /// The formula actually encoded: the input plus two fresh disjoint
    /// clauses over six fresh variables.
    pub formula: CnfFormula,
    /// Number of variables of the input formula (the fresh ones follow).
    pub original_vars: usize,
}

impl Sat3Instance {
    fn n_prime(&self) -> usize {
        self.formula.num_vars
    }

    pub fn t(&self, i: usize) -> Vertex {
        2 * i
    }

    pub fn f(&self, i: usize) -> Vertex {
        2 * i + 1
    }

    pub fn r_star(&self, i: usize) -> Vertex {
        2 * self.n_prime() + 5 * i
    }

    pub fn r_star2(&self, i: usize) -> Vertex {
        self.r_star(i) + 1
    }

    pub fn r_star3(&self, i: usize) -> Vertex {
        self.r_star(i) + 2
    }

    pub fn r_prime(&self, i: usize) -> Vertex {
        self.r_star(i) + 3
    }

    pub fn r_second(&self, i: usize) -> Vertex {
        self.r_star(i) + 4
    }

    pub fn r_prime0(&self) -> Vertex {
        7 * self.n_prime()
    }

    pub fn s_star(&self, k: usize) -> Vertex {
        7 * self.n_prime() + 1 + 5 * k
    }

    pub fn s_star2(&self, k: usize) -> Vertex {
        self.s_star(k) + 1
    }

    pub fn s_star3(&self, k: usize) -> Vertex {
        self.s_star(k) + 2
    }

    pub fn s_prime(&self, k: usize) -> Vertex {
        self.s_star(k) + 3
    }

    pub fn s_second(&self, k: usize) -> Vertex {
        self.s_star(k) + 4
    }

    pub fn s_prime0(&self) -> Vertex {
        7 * self.n_prime() + 1 + 5 * self.formula.clauses.len()
    }

    pub fn universal(&self) -> Vertex {
        7 * self.n_prime() + 2 + 5 * self.formula.clauses.len()
    }
}

/// Builds the strict teaching instance for `phi` with target dimension 2.
/// Preprocessing first drops tautological clauses (one would attach both of
/// a variable's pair vertices to its clause gadget, which no dimension-2
/// teaching set can untangle, while such clauses constrain nothing), then
/// appends two fresh disjoint clauses over six fresh variables; this keeps
/// satisfiability unchanged and guarantees a pair of variables that never
/// co-occur in a clause, which the whole-graph teaching set needs.
pub fn gen_sat3(phi: &CnfFormula) -> Result<Sat3Instance, ReductionError> {
    let mut formula = phi.clone();
    formula.clauses.retain(|clause| {
        !clause
            .iter()
            .any(|l| clause.contains(&Lit { var: l.var, negated: !l.negated }))
    });
    let base = formula.num_vars;
    formula.num_vars += 6;
    formula
        .clauses
        .push([Lit::pos(base), Lit::pos(base + 1), Lit::pos(base + 2)]);
    formula
        .clauses
        .push([Lit::pos(base + 3), Lit::pos(base + 4), Lit::pos(base + 5)]);

    let n = formula.num_vars;
    let m = formula.clauses.len();
    let total = 7 * n + 5 * m + 3;

    // A shell instance gives access to the fixed vertex layout before the
    // graph exists: variable pairs, variable gadgets, r'0, clause gadgets,
    // s'0, then the universal vertex. Roles are 1-based so the extras r'0
    // and s'0 keep their traditional names.
    let shell = Sat3Instance {
        instance: GeneratedInstance {
            family: BallFamily::from_center_radius_pairs(&Graph::edgeless(1), &[]).unwrap(),
            k: 2,
            roles: Vec::new(),
            radii: BTreeMap::new(),
        },
        formula: formula.clone(),
        original_vars: phi.num_vars,
    };
    let mut roles = vec![String::new(); total];
    for i in 0..n {
        roles[shell.t(i)] = format!("t{}", i + 1);
        roles[shell.f(i)] = format!("f{}", i + 1);
        roles[shell.r_star(i)] = format!("r*{}", i + 1);
        roles[shell.r_star2(i)] = format!("r**{}", i + 1);
        roles[shell.r_star3(i)] = format!("r***{}", i + 1);
        roles[shell.r_prime(i)] = format!("r'{}", i + 1);
        roles[shell.r_second(i)] = format!("r''{}", i + 1);
    }
    roles[shell.r_prime0()] = "r'0".to_string();
    for k in 0..m {
        roles[shell.s_star(k)] = format!("s*{}", k + 1);
        roles[shell.s_star2(k)] = format!("s**{}", k + 1);
        roles[shell.s_star3(k)] = format!("s***{}", k + 1);
        roles[shell.s_prime(k)] = format!("s'{}", k + 1);
        roles[shell.s_second(k)] = format!("s''{}", k + 1);
    }
    roles[shell.s_prime0()] = "s'0".to_string();
    roles[shell.universal()] = "a".to_string();

    let mut edges: HashSet<(Vertex, Vertex)> = HashSet::new();
    let add = |u: Vertex, v: Vertex, edges: &mut HashSet<(Vertex, Vertex)>| {
        debug_assert_ne!(u, v);
        edges.insert((u.min(v), u.max(v)));
    };

    // Force-gadgets: v'-v*, v'-v**, v''-v*, v''-v**, v''-v*** (v'-v*** absent).
    for i in 0..n {
        add(shell.r_prime(i), shell.r_star(i), &mut edges);
        add(shell.r_prime(i), shell.r_star2(i), &mut edges);
        add(shell.r_second(i), shell.r_star(i), &mut edges);
        add(shell.r_second(i), shell.r_star2(i), &mut edges);
        add(shell.r_second(i), shell.r_star3(i), &mut edges);
        // Attachment to the variable pair.
        add(shell.r_star(i), shell.t(i), &mut edges);
        add(shell.r_star(i), shell.f(i), &mut edges);
        add(shell.r_star3(i), shell.t(i), &mut edges);
        add(shell.r_star3(i), shell.f(i), &mut edges);
    }
    for k in 0..m {
        add(shell.s_prime(k), shell.s_star(k), &mut edges);
        add(shell.s_prime(k), shell.s_star2(k), &mut edges);
        add(shell.s_second(k), shell.s_star(k), &mut edges);
        add(shell.s_second(k), shell.s_star2(k), &mut edges);
        add(shell.s_second(k), shell.s_star3(k), &mut edges);
        // Literal attachments: the vertex whose underlying assignment does
        // NOT satisfy the clause.
        for lit in &formula.clauses[k] {
            let target = if lit.negated {
                shell.t(lit.var)
            } else {
                shell.f(lit.var)
            };
            add(shell.s_star(k), target, &mut edges);
            add(shell.s_star3(k), target, &mut edges);
        }
    }
    let s_star_all: Vec<Vertex> = (0..m)
        .flat_map(|k| [shell.s_star(k), shell.s_star2(k), shell.s_star3(k)])
        .collect();
    let r_star_all: Vec<Vertex> = (0..n)
        .flat_map(|i| [shell.r_star(i), shell.r_star2(i), shell.r_star3(i)])
        .collect();
    let s_prime_all: Vec<Vertex> = std::iter::once(shell.s_prime0())
        .chain((0..m).flat_map(|k| [shell.s_prime(k), shell.s_second(k)]))
        .collect();
    let r_prime_all: Vec<Vertex> = std::iter::once(shell.r_prime0())
        .chain((0..n).flat_map(|i| [shell.r_prime(i), shell.r_second(i)]))
        .collect();
    // Bicliques S*-R*, R*-S', S*-R'.
    for &u in &s_star_all {
        for &v in &r_star_all {
            add(u, v, &mut edges);
        }
        for &v in &r_prime_all {
            add(u, v, &mut edges);
        }
    }
    for &u in &r_star_all {
        for &v in &s_prime_all {
            add(u, v, &mut edges);
        }
    }
    // Cliques within S* and within R*.
    for (pos, &u) in s_star_all.iter().enumerate() {
        for &v in &s_star_all[pos + 1..] {
            add(u, v, &mut edges);
        }
    }
    for (pos, &u) in r_star_all.iter().enumerate() {
        for &v in &r_star_all[pos + 1..] {
            add(u, v, &mut edges);
        }
    }
    // Universal vertex.
    for v in 0..total - 1 {
        add(shell.universal(), v, &mut edges);
    }

    let edge_list: Vec<(Vertex, Vertex)> = {
        let mut e: Vec<_> = edges.into_iter().collect();
        e.sort_unstable();
        e
    };
    let graph = Graph::new(total, &edge_list).expect("generated graph is simple");
    let family = BallFamily::strict(&graph);
    Ok(Sat3Instance {
        instance: GeneratedInstance {
            family,
            k: 2,
            roles,
            radii: BTreeMap::new(),
        },
        formula,
        original_vars: phi.num_vars,
    })
}

/// First pair of variables (ascending) sharing no clause; the appended fresh
/// clauses guarantee one exists.
fn never_cooccurring_pair(formula: &CnfFormula) -> Option<(usize, usize)> {
    let mut together = vec![HashSet::new(); formula.num_vars];
    for clause in &formula.clauses {
        for a in clause {
            for b in clause {
                together[a.var].insert(b.var);
            }
        }
    }
    for i in 0..formula.num_vars {
        for j in i + 1..formula.num_vars {
            if !together[i].contains(&j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The explicit dimension-2 teaching map derived from a satisfying
/// assignment of the input formula (fresh preprocessing variables are set to
/// true internally). Singleton balls teach themselves; every radius-1 ball
/// follows the construction's table; the whole-graph ball teaches the
/// true-vertices of a never-co-occurring variable pair.
pub fn table1_map(inst: &Sat3Instance, tau: &[bool]) -> Result<TeachingMap, ReductionError> {
    if tau.len() != inst.original_vars {
        return Err(ReductionError::AssignmentLength {
            expected: inst.original_vars,
            found: tau.len(),
        });
    }
    let mut full_tau = tau.to_vec();
    full_tau.resize(inst.formula.num_vars, true);
    for (k, clause) in inst.formula.clauses.iter().enumerate() {
        if !clause.iter().any(|l| l.satisfied_by(full_tau[l.var])) {
            return Err(ReductionError::UnsatisfyingAssignment(k));
        }
    }
    let (i, j) = never_cooccurring_pair(&inst.formula).ok_or_else(|| {
        ReductionError::StructuralViolation("no never-co-occurring variable pair".into())
    })?;

    let family = &inst.instance.family;
    let g = family.graph();
    let n_vertices = g.n();
    let whole: Vec<Vertex> = (0..n_vertices).collect();

    // Teaching rule for the radius-1 ball around each non-universal vertex.
    let mut rule: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for v in 0..inst.formula.num_vars {
        let sat_vertex = if full_tau[v] { inst.t(v) } else { inst.f(v) };
        rule.insert(inst.t(v), vec![inst.t(v), inst.universal()]);
        rule.insert(inst.f(v), vec![inst.f(v), inst.universal()]);
        rule.insert(inst.r_star(v), vec![inst.r_prime(v), sat_vertex]);
        rule.insert(inst.r_star2(v), vec![inst.r_prime(v), inst.s_prime0()]);
        rule.insert(inst.r_star3(v), vec![inst.r_second(v), inst.s_prime0()]);
        rule.insert(inst.r_prime(v), vec![inst.r_prime(v), inst.r_star2(v)]);
        rule.insert(inst.r_second(v), vec![inst.r_second(v), inst.r_star3(v)]);
    }
    rule.insert(inst.r_prime0(), vec![inst.r_prime0(), inst.universal()]);
    for (k, clause) in inst.formula.clauses.iter().enumerate() {
        let lit = clause
            .iter()
            .find(|l| l.satisfied_by(full_tau[l.var]))
            .expect("clause satisfied");
        // The satisfied literal's opposite-assignment vertex is adjacent to
        // the clause gadget by construction.
        let v = if full_tau[lit.var] {
            inst.f(lit.var)
        } else {
            inst.t(lit.var)
        };
        rule.insert(inst.s_star(k), vec![inst.s_prime(k), v]);
        rule.insert(inst.s_star2(k), vec![inst.s_prime(k), inst.r_prime0()]);
        rule.insert(inst.s_star3(k), vec![inst.s_second(k), inst.r_prime0()]);
        rule.insert(inst.s_prime(k), vec![inst.s_prime(k), inst.s_star2(k)]);
        rule.insert(inst.s_second(k), vec![inst.s_second(k), inst.s_star3(k)]);
    }
    rule.insert(inst.s_prime0(), vec![inst.s_prime0(), inst.universal()]);

    // Radius-1 member sets around each vertex, to match family balls by set.
    let mut by_set: HashMap<Vec<Vertex>, Vertex> = HashMap::new();
    for v in 0..n_vertices {
        if v == inst.universal() {
            continue;
        }
        let b1 = ball(g, v, 1).unwrap();
        by_set.insert(b1.members().to_vec(), v);
    }

    let mut sets = Vec::with_capacity(family.len());
    for b in family.balls() {
        let members = b.members();
        let teach = if members.len() == 1 {
            vec![members[0]]
        } else if members == whole.as_slice() {
            vec![inst.t(i), inst.t(j)]
        } else {
            let v = by_set.get(members).ok_or_else(|| {
                ReductionError::StructuralViolation(format!(
                    "ball ({}, {}) is neither a singleton, the whole graph, nor a radius-1 ball",
                    b.center(),
                    b.radius()
                ))
            })?;
            rule[v].clone()
        };
        sets.push(teach);
    }
    Ok(TeachingMap::new(sets))
}

/// Reads the assignment forced by a verifying dimension-2 map: each variable
/// gadget's starred ball must teach exactly one of the variable's true/false
/// vertices.
pub fn extract_assignment_sat3(
    inst: &Sat3Instance,
    map: &TeachingMap,
) -> Result<Vec<bool>, ReductionError> {
    let family = &inst.instance.family;
    let conflicts =
        verify(family, map).map_err(|e| ReductionError::StructuralViolation(e.to_string()))?;
    if !conflicts.is_empty() {
        return Err(ReductionError::MapDoesNotVerify(conflicts.len()));
    }
    if map.dimension() > 2 {
        return Err(ReductionError::DimensionTooLarge {
            target: 2,
            found: map.dimension(),
        });
    }
    let g = family.graph();
    let mut assignment = Vec::with_capacity(inst.original_vars);
    for v in 0..inst.original_vars {
        let b1 = ball(g, inst.r_star(v), 1).unwrap();
        let id = family.find_by_members(b1.members()).ok_or_else(|| {
            ReductionError::StructuralViolation(format!("missing gadget ball for variable {v}"))
        })?;
        let teach = map.set(id);
        let has_t = teach.contains(&inst.t(v));
        let has_f = teach.contains(&inst.f(v));
        match (has_t, has_f) {
            (true, false) => assignment.push(true),
            (false, true) => assignment.push(false),
            _ => {
                return Err(ReductionError::StructuralViolation(format!(
                    "teaching set of the variable-{v} gadget ball holds {} of the pair",
                    if has_t { "both" } else { "neither" }
                )))
            }
        }
    }
    // A verifying dimension-2 map always encodes a satisfying assignment.
    let phi = CnfFormula {
        num_vars: inst.original_vars,
        clauses: inst
            .formula
            .clauses
            .iter()
            .take(inst.formula.clauses.len() - 2)
            .cloned()
            .collect(),
    };
    if !phi.satisfied_by(&assignment)? {
        return Err(ReductionError::StructuralViolation(
            "extracted assignment does not satisfy the formula".into(),
        ));
    }
    Ok(assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve;

    fn tiny_formula() -> CnfFormula {
        // (x0 v x1 v x1): satisfiable.
        CnfFormula::new(2, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(1)]]).unwrap()
    }

    #[test]
    fn vertex_count_matches_construction() {
        let inst = gen_sat3(&tiny_formula()).unwrap();
        let n = inst.formula.num_vars;
        let m = inst.formula.clauses.len();
        assert_eq!(n, 8);
        assert_eq!(m, 3);
        assert_eq!(inst.instance.graph().n(), 7 * n + 5 * m + 3);
    }

    #[test]
    fn output_is_split_with_diameter_two() {
        let inst = gen_sat3(&tiny_formula()).unwrap();
        let g = inst.instance.graph();
        assert!(g.is_split().is_some());
        assert_eq!(g.diameter().overall(), Some(2));
    }

    #[test]
    fn figure_attachments() {
        // Variables i, j, q, p and clauses (xi v xj v ~xq), (xj v xq v ~xp):
        // the first clause gadget's starred vertices attach to f_i, f_j, t_q.
        let phi = CnfFormula::new(
            4,
            vec![
                [Lit::pos(0), Lit::pos(1), Lit::neg(2)],
                [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
            ],
        )
        .unwrap();
        let inst = gen_sat3(&phi).unwrap();
        let g = inst.instance.graph();
        let a_set: Vec<Vertex> = (0..2 * inst.formula.num_vars).collect();
        for s in [inst.s_star(0), inst.s_star3(0)] {
            let attached: Vec<Vertex> = a_set
                .iter()
                .copied()
                .filter(|&v| g.has_edge(s, v))
                .collect();
            assert_eq!(attached, vec![inst.f(0), inst.f(1), inst.t(2)]);
        }
        for s in [inst.s_star(1), inst.s_star3(1)] {
            let attached: Vec<Vertex> = a_set
                .iter()
                .copied()
                .filter(|&v| g.has_edge(s, v))
                .collect();
            assert_eq!(attached, vec![inst.f(1), inst.f(2), inst.t(3)]);
        }
        // The middle starred vertex never touches the variable pairs.
        assert!(a_set.iter().all(|&v| !g.has_edge(inst.s_star2(0), v)));
    }

    #[test]
    fn table_map_verifies_with_dimension_two() {
        let phi = tiny_formula();
        let tau = sat3_brute(&phi).unwrap().unwrap();
        let inst = gen_sat3(&phi).unwrap();
        let map = table1_map(&inst, &tau).unwrap();
        assert_eq!(map.dimension(), 2);
        assert!(verify(&inst.instance.family, &map).unwrap().is_empty());
    }

    #[test]
    fn table_map_rows() {
        let phi = tiny_formula();
        let inst = gen_sat3(&phi).unwrap();
        let map = table1_map(&inst, &[true, false]).unwrap();
        let fam = &inst.instance.family;
        let g = fam.graph();
        let ball_of = |v: Vertex| {
            let b = ball(g, v, 1).unwrap();
            fam.find_by_members(b.members()).unwrap()
        };
        // Gadget rows.
        let mut expect = [inst.r_prime(0), inst.r_star2(0)];
        expect.sort_unstable();
        assert_eq!(map.set(ball_of(inst.r_prime(0))), &expect[..]);
        let mut expect = [inst.r_prime(0), inst.t(0)];
        expect.sort_unstable();
        assert_eq!(map.set(ball_of(inst.r_star(0))), &expect[..]);
        let mut expect = [inst.r_prime(1), inst.f(1)];
        expect.sort_unstable();
        assert_eq!(map.set(ball_of(inst.r_star(1))), &expect[..]);
        // Clause row: first satisfied literal of clause 0 is x0 = true.
        let mut expect = [inst.s_prime(0), inst.f(0)];
        expect.sort_unstable();
        assert_eq!(map.set(ball_of(inst.s_star(0))), &expect[..]);
        // Whole-graph ball teaches a never-co-occurring true pair.
        let whole = fam
            .find_by_members(&(0..g.n()).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(map.set(whole).len(), 2);
    }

    #[test]
    fn table_map_rejects_unsatisfying_assignment() {
        // (x0 v x0 v x0) forces x0 = true.
        let phi = CnfFormula::new(1, vec![[Lit::pos(0), Lit::pos(0), Lit::pos(0)]]).unwrap();
        let inst = gen_sat3(&phi).unwrap();
        assert!(matches!(
            table1_map(&inst, &[false]),
            Err(ReductionError::UnsatisfyingAssignment(0))
        ));
        assert!(table1_map(&inst, &[true]).is_ok());
    }

    #[test]
    fn extraction_round_trips() {
        let phi = tiny_formula();
        let inst = gen_sat3(&phi).unwrap();
        for tau in [[true, true], [true, false], [false, true]] {
            if !phi.satisfied_by(&tau).unwrap() {
                continue;
            }
            let map = table1_map(&inst, &tau).unwrap();
            let extracted = extract_assignment_sat3(&inst, &map).unwrap();
            assert_eq!(extracted, tau.to_vec());
        }
    }

    #[test]
    fn solver_witness_extracts_a_satisfying_assignment() {
        let phi = tiny_formula();
        let inst = gen_sat3(&phi).unwrap();
        let res = solve(&inst.instance.family, 2);
        assert!(res.is_found());
        let extracted = extract_assignment_sat3(&inst, res.map().unwrap()).unwrap();
        assert!(phi.satisfied_by(&extracted).unwrap());
    }

    #[test]
    fn unsatisfiable_formula_is_infeasible_at_two() {
        // (x) and (~x) in three-literal form.
        let phi = CnfFormula::new(
            1,
            vec![
                [Lit::pos(0), Lit::pos(0), Lit::pos(0)],
                [Lit::neg(0), Lit::neg(0), Lit::neg(0)],
            ],
        )
        .unwrap();
        assert!(sat3_brute(&phi).unwrap().is_none());
        let inst = gen_sat3(&phi).unwrap();
        assert!(!solve(&inst.instance.family, 2).is_found());
    }

    #[test]
    fn dimacs_parsing() {
        let text = "c tiny\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n";
        let phi = CnfFormula::from_dimacs(text).unwrap();
        assert_eq!(phi.num_vars, 3);
        assert_eq!(phi.clauses.len(), 2);
        assert_eq!(phi.clauses[0][1], Lit::neg(1));
        assert_eq!(
            CnfFormula::from_dimacs("p cnf 2 1\n1 2 0\n").unwrap_err().line,
            2
        );
        assert_eq!(CnfFormula::from_dimacs("1 2 3 0\n").unwrap_err().line, 1);
        assert_eq!(
            CnfFormula::from_dimacs("p cnf 2 1\n1 2 9 0\n").unwrap_err().line,
            2
        );
    }

    #[test]
    fn brute_force_guard() {
        let phi = CnfFormula::new(21, vec![]).unwrap();
        assert!(matches!(sat3_brute(&phi), Err(ReductionError::SizeGuard(_))));
    }

    #[test]
    fn roles_resolve_uniquely() {
        let inst = gen_sat3(&tiny_formula()).unwrap();
        let mut seen = std::collections::HashSet::new();
        for role in &inst.instance.roles {
            assert!(!role.is_empty());
            assert!(seen.insert(role.clone()), "duplicate role {role}");
        }
        assert_eq!(inst.instance.vertex_by_role("a"), Some(inst.universal()));
        assert_eq!(inst.instance.vertex_by_role("r'0"), Some(inst.r_prime0()));
    }
}

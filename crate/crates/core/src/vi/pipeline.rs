//! End-to-end pipeline: find the smallest vertex-integrity witness, classify
//! twins, clamp the target dimension to the instance bound, reduce, solve the
//! reduced instance exactly, compactify, and lift the solution back.
//!
//! With the provable retention bound, reduced infeasibility transfers to the
//! original instance. Under heuristic retention it does not, so reduced
//! infeasibility (or a failed lift) falls back to solving the original
//! instance directly; the report records when that happened.

use num_bigint::BigUint;

use crate::balls::BallFamily;
use crate::solver::{solve, SolveResult, SolveStats, SolveStatus};

use super::cores::compactify;
use super::{bounds, lift, reduce_instance, twin_classes, vi_witness, Retain, ViError};

#[derive(Debug, Clone)]
pub struct FptReport {
    pub result: SolveResult,
    /// Smallest feasible vertex-integrity budget.
    pub p: usize,
    /// Instance-specific dimension bound.
    pub s: u64,
    /// Target dimension after clamping to `s`.
    pub k_effective: usize,
    pub reduced_vertices: usize,
    pub was_cut: bool,
    /// True when reduced infeasibility or a failed lift forced a direct
    /// solve of the original instance.
    pub used_fallback: bool,
}

pub fn fpt_solve(family: &BallFamily, k: usize, retain: &Retain) -> Result<FptReport, ViError> {
    let g = family.graph();
    let mut witness = None;
    for p in 1..=g.n().max(1) {
        if let Some(w) = vi_witness(g, p) {
            witness = Some(w);
            break;
        }
    }
    let witness = witness.expect("p = n always admits the empty separator");
    let p = witness.p();
    let classes = twin_classes(family, &witness);
    let bnds = bounds(family, &witness, &classes);
    // A dimension of s is always achievable, so larger targets are clamped.
    let k_effective = k.min(bnds.s as usize);

    let reduced = reduce_instance(family, &witness, &classes, retain, &bnds)?;
    let reduced_vertices = reduced.family.graph().n();
    let was_cut = reduced.was_cut;
    let mut stats = SolveStats::default();

    let reduced_result = solve(&reduced.family, k_effective);
    stats.nodes += reduced_result.stats.nodes;
    stats.propagations += reduced_result.stats.propagations;

    let retain_is_sound = match retain {
        Retain::PaperBound => true,
        Retain::Count(r) => BigUint::from(*r) >= bnds.f,
    };

    let (status, used_fallback) = match reduced_result.status {
        SolveStatus::Infeasible => {
            if !was_cut || retain_is_sound {
                (SolveStatus::Infeasible, false)
            } else {
                let direct = solve(family, k_effective);
                stats.nodes += direct.stats.nodes;
                stats.propagations += direct.stats.propagations;
                (direct.status, true)
            }
        }
        SolveStatus::Found(map_reduced) => {
            let classes_reduced = twin_classes(&reduced.family, &reduced.witness);
            let compact = compactify(
                &reduced.family,
                &map_reduced,
                &reduced.witness,
                &classes_reduced,
                bnds.s,
            )?;
            match lift(family, &witness, &classes, &reduced, &compact, bnds.s) {
                Ok(full) => (SolveStatus::Found(full), false),
                Err(ViError::LiftInfeasible { .. }) => {
                    let direct = solve(family, k_effective);
                    stats.nodes += direct.stats.nodes;
                    stats.propagations += direct.stats.propagations;
                    (direct.status, true)
                }
                Err(other) => return Err(other),
            }
        }
    };

    Ok(FptReport {
        result: SolveResult { status, stats },
        p,
        s: bnds.s,
        k_effective,
        reduced_vertices,
        was_cut,
        used_fallback,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solver::min_dimension;
    use crate::teaching::verify;

    fn twin_k2s(copies: usize) -> BallFamily {
        let edges: Vec<_> = (0..copies).map(|i| (2 * i, 2 * i + 1)).collect();
        BallFamily::strict(&Graph::new(2 * copies, &edges).unwrap())
    }

    #[test]
    fn identity_reduction_matches_direct_solve() {
        let fam = twin_k2s(2);
        for k in 0..4 {
            let report = fpt_solve(&fam, k, &Retain::Count(3)).unwrap();
            assert!(!report.was_cut);
            assert_eq!(report.result.is_found(), solve(&fam, k).is_found(), "k={k}");
        }
    }

    #[test]
    fn eight_twins_match_direct_solve_at_k2() {
        let fam = twin_k2s(8);
        let report = fpt_solve(&fam, 2, &Retain::Count(3)).unwrap();
        assert!(report.was_cut);
        let direct = solve(&fam, 2);
        assert_eq!(report.result.is_found(), direct.is_found());
        let map = report.result.map().unwrap();
        assert!(verify(&fam, map).unwrap().is_empty());
        assert_eq!(map.dimension(), min_dimension(&fam).0);
    }

    #[test]
    fn infeasible_k_stays_infeasible_without_cutting() {
        let fam = twin_k2s(2);
        let report = fpt_solve(&fam, 1, &Retain::Count(5)).unwrap();
        assert!(!report.was_cut);
        assert!(!report.result.is_found());
        assert!(!report.used_fallback);
    }

    #[test]
    fn paper_bound_never_cuts_desk_instances() {
        let fam = twin_k2s(5);
        let report = fpt_solve(&fam, 2, &Retain::PaperBound).unwrap();
        assert!(!report.was_cut);
        assert!(report.result.is_found());
    }

    #[test]
    fn clamps_oversized_k_to_s() {
        let fam = twin_k2s(3);
        let report = fpt_solve(&fam, 1000, &Retain::Count(3)).unwrap();
        assert_eq!(report.k_effective, report.s as usize);
        assert!(report.result.is_found());
    }

    #[test]
    fn hub_instance_round_trips() {
        let g = Graph::new(
            9,
            &[(0, 1), (2, 3), (4, 5), (6, 7), (0, 8), (2, 8), (4, 8), (6, 8)],
        )
        .unwrap();
        let fam = BallFamily::strict(&g);
        let (dim, _) = min_dimension(&fam);
        let report = fpt_solve(&fam, dim, &Retain::Count(3)).unwrap();
        assert!(report.result.is_found());
        let map = report.result.map().unwrap();
        assert!(verify(&fam, map).unwrap().is_empty());
        let below = fpt_solve(&fam, dim - 1, &Retain::Count(3)).unwrap();
        assert!(!below.result.is_found());
    }
}

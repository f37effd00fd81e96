//! Instance-specific bounds for the kernelization: the dimension bound `s`,
//! the per-component ball count `b`, the 2-extended-core bound `c`, and the
//! per-class retention bound `f`. The latter two are computed as exact big
//! integers; `f` in particular is astronomically large on any nontrivial
//! instance, which is why heuristic retention exists.

use num_bigint::BigUint;

use crate::balls::BallFamily;

use super::{TwinClasses, ViWitness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Dimension bound: |X| + 2p * (number of twin classes). After orbit
    /// pruning no teaching set can exceed this.
    pub s: u64,
    /// Maximum number of family balls centered in any single component.
    pub b: u64,
    /// Bound on the number of components the 2-extended core can reach.
    pub c: BigUint,
    /// Per-class retention bound: keeping this many twins per class provably
    /// preserves the teaching dimension.
    pub f: BigUint,
}

/// Exact binomial coefficient over big integers (0 when k exceeds n).
fn binomial(n: &BigUint, k: u64) -> BigUint {
    let big_k = BigUint::from(k);
    if n < &big_k {
        return BigUint::from(0u32);
    }
    let mut result = BigUint::from(1u32);
    for i in 0..k {
        result = result * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    result
}

/// Computes the instance-specific bounds from a witness and its twin
/// classification.
pub fn bounds(family: &BallFamily, witness: &ViWitness, classes: &TwinClasses) -> Bounds {
    let p = witness.p() as u64;
    let x_len = witness.x().len() as u64;
    let class_count = classes.len() as u64;
    let s = x_len + 2 * p * class_count;

    // b: balls are attributed to the component holding their canonical
    // center.
    let mut per_component = vec![0u64; witness.components().len()];
    for ball in family.balls() {
        if let Some(ci) = classes.component_of(ball.center()) {
            per_component[ci] += 1;
        }
    }
    let b = per_component.iter().copied().max().unwrap_or(0);

    // Blueprint count per ball, then perfect-class count, then the chain of
    // core bounds.
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    let nbp = two.pow(x_len as u32) * two.pow(p as u32) * three.pow((p * class_count) as u32);
    let npc = BigUint::from(class_count) * nbp.pow(b as u32);
    let big_s = BigUint::from(s);
    let big_b = BigUint::from(b);
    let big_p = BigUint::from(p);
    let ck = &big_b * &npc * &big_s * (&big_s + 1u32);
    let c = &big_s * &big_b * (&big_p + &big_s * &big_b * (&big_p + &ck));

    let f = &c + binomial(&(&big_p * &c + &big_p), s).pow(b as u32) + 1u32;

    Bounds { s, b, c, f }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::vi::{twin_classes, vi_witness};

    #[test]
    fn binomial_matches_small_cases() {
        assert_eq!(binomial(&BigUint::from(5u32), 2), BigUint::from(10u32));
        assert_eq!(binomial(&BigUint::from(4u32), 0), BigUint::from(1u32));
        assert_eq!(binomial(&BigUint::from(3u32), 5), BigUint::from(0u32));
        assert_eq!(binomial(&BigUint::from(60u32), 30).to_string(), "118264581564861424");
    }

    #[test]
    fn s_for_one_class_of_k2_twins() {
        // Empty separator, one class of K2 twins at p = 2: s = 0 + 2*2*1.
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let fam = BallFamily::strict(&g);
        let w = vi_witness(&g, 2).unwrap();
        let classes = twin_classes(&fam, &w);
        assert_eq!(classes.len(), 1);
        let bnd = bounds(&fam, &w, &classes);
        assert_eq!(bnd.s, 4);
    }

    #[test]
    fn b_counts_distinct_balls_per_k2_component() {
        // A strict K2 component carries {u}, {v}, {u,v}: three balls.
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let fam = BallFamily::strict(&g);
        let w = vi_witness(&g, 2).unwrap();
        let classes = twin_classes(&fam, &w);
        let bnd = bounds(&fam, &w, &classes);
        assert_eq!(bnd.b, 3);
    }

    #[test]
    fn f_strictly_exceeds_c() {
        let g = Graph::new(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let fam = BallFamily::strict(&g);
        let w = vi_witness(&g, 2).unwrap();
        let classes = twin_classes(&fam, &w);
        let bnd = bounds(&fam, &w, &classes);
        assert!(bnd.f > bnd.c);
    }
}

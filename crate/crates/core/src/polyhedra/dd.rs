//! Double description: generators of `{x : a_i . x >= 0}`.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::arith::{primitive_integer, q_int, Q};

/// Generators of a polyhedral cone: extreme rays modulo the lineality space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Scales a nonzero vector to a primitive integer vector (as rationals).
pub fn normalize(v: &[Q]) -> Vec<Q> {
    primitive_integer(v).iter().map(q_int).collect()
}

struct Ray {
    v: Vec<Q>,
    tight: BTreeSet<usize>,
}

/// Generators of `{x in Q^d : a . x >= 0 for a in ineqs, a . x = 0 for a in eqs}`.
pub fn cone_from_constraints(d: usize, ineqs: &[Vec<Q>], eqs: &[Vec<Q>]) -> ConeGenerators {
    let mut constraints: Vec<Vec<Q>> = Vec::new();
    for e in eqs {
        constraints.push(e.clone());
        constraints.push(e.iter().map(|x| -x).collect());
    }
    constraints.extend(ineqs.iter().cloned());
    let mut lineality: Vec<Vec<Q>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    for (idx, a) in constraints.iter().enumerate() {
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let s = dot(a, &l0);
            if s.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
            }
            let s = dot(a, &l0);
            for l in lineality.iter_mut() {
                let c = dot(a, l) / &s;
                if !c.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                }
            }
            for r in rays.iter_mut() {
                let c = dot(a, &r.v) / &s;
                if !c.is_zero() {
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x -= &c * y;
                    }
                }
                r.tight.insert(idx);
            }
            let tight: BTreeSet<usize> = (0..idx).collect();
            rays.push(Ray { v: normalize(&l0), tight });
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for &p in &pos {
            for &n in &neg {
                let common: BTreeSet<usize> = rays[p].tight.intersection(&rays[n].tight).cloned().collect();
                let adjacent = (0..rays.len())
                    .filter(|&r| r != p && r != n)
                    .all(|r| !common.is_subset(&rays[r].tight));
                if !adjacent {
                    continue;
                }
                let v: Vec<Q> = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[n] * y)
                    .collect();
                let mut tight = common;
                tight.insert(idx);
                next.push(Ray { v: normalize(&v), tight });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                r.tight.insert(idx);
                next.push(r);
            } else if vals[i].is_positive() {
                next.push(r);
            }
        }
        rays = next;
    }
    let mut rays: Vec<Vec<Q>> = rays.into_iter().map(|r| r.v).collect();
    rays.sort();
    rays.dedup();
    ConeGenerators { rays, lineality }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    fn v(x: &[i64]) -> Vec<Q> {
        x.iter().map(|&a| q(a)).collect()
    }

    #[test]
    fn orthant() {
        let g = cone_from_constraints(2, &[v(&[1, 0]), v(&[0, 1])], &[]);
        assert_eq!(g.rays, vec![v(&[0, 1]), v(&[1, 0])]);
        assert!(g.lineality.is_empty());
    }

    #[test]
    fn half_plane_has_lineality() {
        let g = cone_from_constraints(2, &[v(&[1, 0])], &[]);
        assert_eq!(g.rays.len(), 1);
        assert_eq!(g.lineality.len(), 1);
    }

    #[test]
    fn square_cone() {
        // homogenized unit square: x0 >= 0 is implied
        let ineqs = vec![v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, -1, 0]), v(&[1, 0, -1])];
        let g = cone_from_constraints(3, &ineqs, &[]);
        assert_eq!(g.rays.len(), 4);
        assert!(g.rays.iter().all(|r| r[0] == q(1)));
    }

    #[test]
    fn equation_cuts_down() {
        let g = cone_from_constraints(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])], &[v(&[0, 0, 1])]);
        assert_eq!(g.rays, vec![v(&[0, 1, 0]), v(&[1, 0, 0])]);
        assert!(g.lineality.is_empty());
    }
}

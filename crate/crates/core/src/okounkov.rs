//! Valuation semigroups, Okounkov bodies, and the global cone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, fmt_q, Q};
use crate::bs::BottSamelson;
use crate::picard::{is_nef, volume, DivisorClass};
use crate::polyhedra::{RationalCone, RationalPolytope};
use crate::sections::{fixed_part_peel, h0_dim, sections};
use crate::valuation::{valuation_set, ValuationVector};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedValuationPoint {
    pub nu: ValuationVector,
    pub level: u32,
    pub class: DivisorClass,
}

/// Distinct valuation vectors of `H^0(O(kD))`.
pub fn level_set(bs: &BottSamelson, d: &DivisorClass, k: u32) -> Result<Vec<ValuationVector>> {
    let basis = sections(bs, &d.scale(k as i64))?;
    Ok(valuation_set(&basis))
}

/// The valuation semigroup of `D` up to level `K`.
pub fn semigroup(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<Vec<GradedValuationPoint>> {
    let eff = d.to_effective(bs)?;
    if eff.coords.iter().any(|&x| x < 0) {
        return Err(Error::NotEffective(eff.coords));
    }
    let mut out = Vec::new();
    for k in 1..=max_level {
        for nu in level_set(bs, d, k)? {
            out.push(GradedValuationPoint { nu, level: k, class: d.clone() });
        }
    }
    Ok(out)
}

fn scaled(nu: &[u32], k: u32) -> Vec<Q> {
    nu.iter().map(|&x| Q::new(x.into(), k.into())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovBody {
    pub polytope: RationalPolytope,
    pub class: DivisorClass,
    pub level: u32,
}

/// Convex hull of `nu / k` over the semigroup up to level `K`.
pub fn body(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<OkounkovBody> {
    let pts: Vec<Vec<Q>> = semigroup(bs, d, max_level)?
        .iter()
        .map(|p| scaled(&p.nu, p.level))
        .collect();
    let polytope = if pts.is_empty() { RationalPolytope::empty(bs.n()) } else { RationalPolytope::hull(&pts)? };
    Ok(OkounkovBody { polytope, class: d.clone(), level: max_level })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCount {
    pub level: u32,
    pub valuations: usize,
    pub h0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub class: DivisorClass,
    pub levels: Vec<LevelCount>,
    /// Lattice volume of the hull at each level `1..=K`.
    pub hull_volumes: Vec<String>,
    pub hull_volume: String,
    pub expected: String,
    pub gap: String,
    /// First level `K >= 2` with `body(K) = body(K - 1)`.
    pub stabilized_at: Option<u32>,
    pub counts_match: bool,
    pub volumes_match: bool,
}

/// Compares level counts with `dim H^0(kD)` and the hull volume with `vol(D)/n!`.
pub fn volume_check(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<VolumeReport> {
    let n = bs.n();
    let vol = volume(bs, d)?;
    let expected = vol / Q::from_integer(factorial(n));
    let mut levels = Vec::new();
    let mut pts: Vec<Vec<Q>> = Vec::new();
    let mut hull_volumes = Vec::new();
    let mut prev: Option<RationalPolytope> = None;
    let mut stabilized_at = None;
    let mut hull_volume = Q::zero();
    for k in 1..=max_level {
        let set = level_set(bs, d, k)?;
        let h0 = h0_dim(bs, &d.scale(k as i64))?;
        levels.push(LevelCount { level: k, valuations: set.len(), h0 });
        pts.extend(set.iter().map(|nu| scaled(nu, k)));
        let p = RationalPolytope::hull(&pts)?;
        hull_volume = p.volume();
        hull_volumes.push(fmt_q(&hull_volume));
        if stabilized_at.is_none() && prev.as_ref() == Some(&p) {
            stabilized_at = Some(k);
        }
        prev = Some(p);
    }
    let gap = &expected - &hull_volume;
    Ok(VolumeReport {
        class: d.clone(),
        counts_match: levels.iter().all(|l| l.valuations == l.h0),
        levels,
        hull_volumes,
        hull_volume: fmt_q(&hull_volume),
        expected: fmt_q(&expected),
        volumes_match: gap.is_zero(),
        gap: fmt_q(&gap),
        stabilized_at,
    })
}

/// An approximation of the global Okounkov cone in `R^n x R^n` (valuation
/// part, then class part in effective coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalConeApprox {
    pub cone: RationalCone,
    pub saturated: bool,
    pub max_level: u32,
    pub class_box: u32,
}

fn boxed_classes(n: usize, b: u32) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=b as i64).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Generators `(nu, [kD])` for effective `D` in `[0, box]^n` and `k <= K`,
/// keeping only hull vertices per class.
fn cone_points(bs: &BottSamelson, max_level: u32, class_box: u32) -> Result<Vec<Vec<BigInt>>> {
    let n = bs.n();
    let mut classes: Vec<Vec<i64>> = Vec::new();
    for m in boxed_classes(n, class_box) {
        if m.iter().all(|&x| x == 0) {
            continue;
        }
        for k in 1..=max_level as i64 {
            classes.push(m.iter().map(|x| x * k).collect());
        }
    }
    classes.sort();
    classes.dedup();
    let per_class: Vec<Result<Vec<Vec<BigInt>>>> = classes
        .par_iter()
        .map(|c| {
            let set = level_set(bs, &DivisorClass::effective(c.clone()), 1)?;
            if set.is_empty() {
                return Ok(vec![]);
            }
            let pts: Vec<Vec<Q>> = set.iter().map(|nu| scaled(nu, 1)).collect();
            let hull = RationalPolytope::hull(&pts)?;
            Ok(hull
                .vertices
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|x| x.to_integer())
                        .chain(c.iter().map(|&x| BigInt::from(x)))
                        .collect()
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in per_class {
        out.extend(r?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Cone generated by the semigroup points of all classes in the box up to
/// level `K`; saturated when `(K + 1, box + 1)` yields the same rays.
pub fn global_cone(bs: &BottSamelson, max_level: u32, class_box: u32) -> Result<GlobalConeApprox> {
    let n = bs.n();
    let here = RationalCone::from_generators(2 * n, &cone_points(bs, max_level, class_box)?)?;
    let next = RationalCone::from_generators(2 * n, &cone_points(bs, max_level + 1, class_box + 1)?)?;
    Ok(GlobalConeApprox { saturated: here.rays == next.rays, cone: here, max_level, class_box })
}

/// Generators of the global cone of a surface `Z_w` (`n = 2`): the divisor
/// `Y_1` with its defining section, the rigid boundary divisors with theirs,
/// and the global cone of `Y_1 = P^1` lifted along the canonical basis.
pub fn indok_generators_surface(bs: &BottSamelson) -> Result<Vec<Vec<BigInt>>> {
    if bs.n() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: bs.n() });
    }
    let z = |v: [i64; 4]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
    let mut gens = vec![z([1, 0, 1, 0])];
    for j in 0..2 {
        let mut e = vec![0i64; 2];
        e[j] = 1;
        let peel = fixed_part_peel(bs, &DivisorClass::effective(e.clone()), 1).map_err(|err| match err {
            Error::Unstable(m) => Error::ChamberResolutionFailure(m),
            other => other,
        })?;
        if peel.fixed.coords == e {
            let mut nu = [0i64; 2];
            nu[j] = 1;
            gens.push(z([nu[0], nu[1], e[0], e[1]]));
        }
    }
    for h in 0..2 {
        let mut c = vec![0i64; 2];
        c[h] = 1;
        let eff = DivisorClass::canonical(c.clone()).to_effective(bs)?.coords;
        // restriction to Y_1 keeps the second canonical coordinate
        let deg = c[1];
        gens.push(z([0, 0, eff[0], eff[1]]));
        if deg > 0 {
            gens.push(z([0, deg, eff[0], eff[1]]));
        }
    }
    gens.sort();
    gens.dedup();
    Ok(gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub class: DivisorClass,
    pub restricted_class: DivisorClass,
    pub level: u32,
    pub image_vertices: Vec<Vec<String>>,
    pub intrinsic_vertices: Vec<Vec<String>>,
    pub contained: bool,
    pub equal: bool,
}

/// Compares the body of `nu`-tails with `nu_1 = 0` against the body of the
/// restricted class on `Y_1 = Z_{(i_2, ..., i_n)}`.
pub fn restriction_check(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<RestrictionReport> {
    if !is_nef(bs, d)? {
        return Err(Error::NotNef(d.to_canonical(bs)?.coords));
    }
    let tail = bs.tail()?;
    let can = d.to_canonical(bs)?;
    let restricted = DivisorClass::canonical(can.coords[1..].to_vec());
    let mut pts = Vec::new();
    for k in 1..=max_level {
        for nu in level_set(bs, d, k)? {
            if nu[0] == 0 {
                pts.push(scaled(&nu[1..], k));
            }
        }
    }
    let image = RationalPolytope::hull(&pts)?;
    let intrinsic = body(&tail, &restricted, max_level)?.polytope;
    let fmt = |p: &RationalPolytope| -> Vec<Vec<String>> {
        p.vertices.iter().map(|v| v.iter().map(fmt_q).collect()).collect()
    };
    Ok(RestrictionReport {
        class: d.clone(),
        restricted_class: restricted,
        level: max_level,
        image_vertices: fmt(&image),
        intrinsic_vertices: fmt(&intrinsic),
        contained: intrinsic.contains_polytope(&image),
        equal: image == intrinsic,
    })
}

/// Valuation vectors grouped by level, for reporting.
pub fn level_table(bs: &BottSamelson, d: &DivisorClass, max_level: u32) -> Result<BTreeMap<u32, Vec<ValuationVector>>> {
    (1..=max_level).map(|k| Ok((k, level_set(bs, d, k)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    #[test]
    fn p1_semigroup_and_body() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let sg = semigroup(&bs, &DivisorClass::effective(vec![1]), 2).unwrap();
        let pts: Vec<(Vec<u32>, u32)> = sg.iter().map(|p| (p.nu.clone(), p.level)).collect();
        assert_eq!(pts, vec![(vec![0], 1), (vec![1], 1), (vec![0], 2), (vec![1], 2), (vec![2], 2)]);
        let b = body(&bs, &DivisorClass::canonical(vec![3]), 2).unwrap();
        assert_eq!(b.polytope.vertices, vec![vec![q(0)], vec![q(3)]]);
    }

    #[test]
    fn zero_class_is_a_point() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let b = body(&bs, &DivisorClass::canonical(vec![0, 0]), 3).unwrap();
        assert_eq!(b.polytope.vertices, vec![vec![q(0), q(0)]]);
        let r = volume_check(&bs, &DivisorClass::canonical(vec![0, 0]), 2).unwrap();
        assert!(r.volumes_match && r.counts_match);
    }

    #[test]
    fn a2_body_area() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let b = body(&bs, &DivisorClass::canonical(vec![0, 1]), 2).unwrap();
        assert_eq!(b.polytope.volume(), qf(1, 2));
    }

    #[test]
    fn p1_global_cone() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let g = global_cone(&bs, 2, 2).unwrap();
        let rays: Vec<Vec<i64>> = g.cone.rays.iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        assert_eq!(rays, vec![vec![0, 1], vec![1, 1]]);
        assert!(g.saturated);
        let empty = global_cone(&bs, 1, 0).unwrap();
        assert!(empty.cone.rays.is_empty());
    }
}

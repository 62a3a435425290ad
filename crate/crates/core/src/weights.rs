//! Torus weights on the valuation semigroup, the weight projection of a body,
//! and asymptotic weight multiplicities from slices.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, Q};
use crate::bs::BottSamelson;
use crate::linalg::solve;
use crate::okounkov::body;
use crate::picard::{is_nef, DivisorClass};
use crate::polyhedra::RationalPolytope;
use crate::sections::sections;
use crate::valuation::{adapted_basis, ValuationVector};
use crate::{Error, Result};

/// Projection of weights to a sub-torus: `mu -> P mu`. `None` is the identity.
pub type TorusProjection = Option<Vec<Vec<i64>>>;

fn project(p: &TorusProjection, mu: &[i64]) -> Vec<i64> {
    match p {
        None => mu.to_vec(),
        Some(rows) => rows.iter().map(|r| r.iter().zip(mu).map(|(a, b)| a * b).sum()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub nu: ValuationVector,
    pub level: u32,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSemigroup {
    pub class: DivisorClass,
    pub nvars: usize,
    pub points: Vec<WeightedPoint>,
}

/// The semigroup of `D` up to level `K` with the (projected) torus weight of
/// each adapted basis section. Every monomial of every basis section is
/// checked to carry the section's weight, so `(nu, k)` determines the weight.
pub fn weighted_semigroup(
    bs: &BottSamelson,
    d: &DivisorClass,
    max_level: u32,
    proj: &TorusProjection,
) -> Result<WeightedSemigroup> {
    let mut points = Vec::new();
    for k in 1..=max_level {
        let dk = d.scale(k as i64);
        let can = dk.to_canonical(bs)?;
        let basis = sections(bs, &dk)?;
        for s in &basis.sections {
            for (e, _) in s.poly.terms() {
                if bs.monomial_weight(&can.coords, e) != s.weight {
                    return Err(Error::VerificationFailure(format!(
                        "monomial {e:?} of a section of weight {:?} has a different weight",
                        s.weight
                    )));
                }
            }
        }
        for s in adapted_basis(&basis).sections {
            let nu = s.poly.lex_min().cloned().ok_or(Error::ZeroSection)?;
            let weight = project(proj, &bs.monomial_weight(&can.coords, &nu));
            points.push(WeightedPoint { nu, level: k, weight });
        }
    }
    Ok(WeightedSemigroup { class: d.clone(), nvars: bs.n(), points })
}

/// `(nu, k) -> L nu + k c + d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWeightMap {
    pub linear: Vec<Vec<Q>>,
    pub per_level: Vec<Q>,
    pub constant: Vec<Q>,
}

impl AffineWeightMap {
    pub fn apply(&self, nu: &[Q], k: &Q) -> Vec<Q> {
        self.linear
            .iter()
            .zip(&self.per_level)
            .zip(&self.constant)
            .map(|((row, c), d)| row.iter().zip(nu).map(|(a, b)| a * b).sum::<Q>() + c * k + d)
            .collect()
    }

    /// The map on the level-one slice, `x -> L x + c`.
    pub fn on_body(&self) -> (Vec<Vec<Q>>, Vec<Q>) {
        (self.linear.clone(), self.per_level.clone())
    }
}

/// The affine map fitting every weighted point exactly.
pub fn weight_projection(ws: &WeightedSemigroup) -> Result<AffineWeightMap> {
    let first = ws.points.first().ok_or(Error::EmptyInput)?;
    let r = first.weight.len();
    let n = ws.nvars;
    let rows: Vec<Vec<Q>> = ws
        .points
        .iter()
        .map(|p| {
            p.nu.iter()
                .map(|&x| Q::from_integer(x.into()))
                .chain([Q::from_integer(p.level.into()), Q::one()])
                .collect()
        })
        .collect();
    let mut linear = Vec::new();
    let mut per_level = Vec::new();
    let mut constant = Vec::new();
    for i in 0..r {
        let rhs: Vec<Q> = ws.points.iter().map(|p| Q::from_integer(p.weight[i].into())).collect();
        let sol = solve(&rows, &rhs, n + 2).ok_or(Error::NotAffine)?;
        linear.push(sol[..n].to_vec());
        per_level.push(sol[n].clone());
        constant.push(sol[n + 1].clone());
    }
    Ok(AffineWeightMap { linear, per_level, constant })
}

/// `#(q^{-1}(mu) ∩ body ∩ (1/k) Z^n)`.
pub fn slice_lattice_count(body: &RationalPolytope, q: &AffineWeightMap, mu: &[Q], k: u32) -> Result<usize> {
    let (l, c) = q.on_body();
    Ok(body.slice(&l, &c, mu)?.lattice_points(k).len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityRow {
    pub level: u32,
    /// `dim W_{k mu}` from the character of `O(kD)`.
    pub dim: u64,
    /// Semigroup points of level `k` with weight `k mu`.
    pub semigroup_count: usize,
    pub lattice_count: usize,
    pub ratio: String,
    pub gap: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub class: DivisorClass,
    pub mu: Vec<String>,
    pub body_dim: i64,
    pub weight_dim: i64,
    pub interior: bool,
    pub slice_vertices: Vec<Vec<String>>,
    pub slice_volume: String,
    pub rows: Vec<MultiplicityRow>,
    /// Whether `|ratio - slice volume|` strictly decreases along the rows.
    pub gap_decreasing: bool,
}

/// Compares `dim W_{k mu} / k^{d - r}` with the lattice volume of the slice
/// `q^{-1}(mu) ∩ Δ(D)` for the levels `k <= K` where `k mu` is integral.
pub fn multiplicity_asymptotics(
    bs: &BottSamelson,
    d: &DivisorClass,
    mu: &[Q],
    max_level: u32,
    proj: &TorusProjection,
) -> Result<MultiplicityReport> {
    let eff = d.to_effective(bs)?;
    if eff.coords.iter().any(|&x| x < 0) {
        return Err(Error::NotEffective(eff.coords));
    }
    let delta = body(bs, d, max_level)?.polytope;
    let ws = weighted_semigroup(bs, d, max_level, proj)?;
    let q = weight_projection(&ws)?;
    if q.constant.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotAffine);
    }
    let (l, c) = q.on_body();
    if mu.len() != l.len() {
        return Err(Error::LengthMismatch { expected: l.len(), got: mu.len() });
    }
    let wpoly = delta.image(&l, &c)?;
    if !wpoly.contains(mu) {
        return Err(Error::NotInterior(format!("{:?} lies outside the weight polytope", mu.iter().map(fmt_q).collect::<Vec<_>>())));
    }
    let interior = wpoly.inequalities.iter().all(|a| {
        let v: Q = &a[0] + a[1..].iter().zip(mu).map(|(x, y)| x * y).sum::<Q>();
        v.is_positive()
    });
    let slice = delta.slice(&l, &c, mu)?;
    let slice_volume = slice.relative_volume();
    let body_dim = delta.dim();
    let weight_dim = wpoly.dim();
    let expo = (body_dim - weight_dim).max(0) as u32;
    let nef = is_nef(bs, d)?;
    let mut rows = Vec::new();
    for k in 1..=max_level {
        let kq = Q::from_integer(k.into());
        let target: Vec<Q> = mu.iter().map(|x| x * &kq).collect();
        if target.iter().any(|x| !x.is_integer()) {
            continue;
        }
        let target: Vec<i64> = target.iter().map(|x| i64::try_from(x.to_integer()).unwrap_or(i64::MAX)).collect();
        let semigroup_count = ws.points.iter().filter(|p| p.level == k && p.weight == target).count();
        let dim = if nef {
            let can = d.scale(k as i64).to_canonical(bs)?;
            bs.cartan
                .bs_character(&bs.word, &can.coords)?
                .iter()
                .filter(|(w, _)| project(proj, w) == target)
                .map(|(_, m)| *m as u64)
                .sum()
        } else {
            semigroup_count as u64
        };
        let lattice_count = slice.lattice_points(k).len();
        let ratio = Q::new((dim as i64).into(), num_traits::pow(kq.to_integer(), expo as usize));
        let gap = (&ratio - &slice_volume).abs();
        rows.push(MultiplicityRow {
            level: k,
            dim,
            semigroup_count,
            lattice_count,
            ratio: fmt_q(&ratio),
            gap: fmt_q(&gap),
        });
    }
    if rows.is_empty() {
        return Err(Error::NonIntegralAll(max_level));
    }
    let gaps: Vec<Q> = rows.iter().map(|r| crate::arith::parse_q(&r.gap).unwrap()).collect();
    let gap_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(MultiplicityReport {
        class: d.clone(),
        mu: mu.iter().map(fmt_q).collect(),
        body_dim,
        weight_dim,
        interior,
        slice_vertices: slice.vertices.iter().map(|v| v.iter().map(fmt_q).collect()).collect(),
        slice_volume: fmt_q(&slice_volume),
        rows,
        gap_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    #[test]
    fn p1_projection() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        for m in 0..4 {
            let ws = weighted_semigroup(&bs, &DivisorClass::canonical(vec![m]), 2, &None).unwrap();
            let f = weight_projection(&ws).unwrap();
            for p in &ws.points {
                let nu: Vec<Q> = p.nu.iter().map(|&x| q(x as i64)).collect();
                assert_eq!(f.apply(&nu, &q(p.level as i64)), vec![q(p.weight[0])]);
            }
            if m > 0 {
                // mu = k m - 2 nu
                assert_eq!(f.linear, vec![vec![q(-2)]]);
                assert_eq!(f.per_level, vec![q(m)]);
            }
        }
    }

    #[test]
    fn p1_zero_weight() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let r = multiplicity_asymptotics(&bs, &DivisorClass::canonical(vec![2]), &[q(0)], 4, &None).unwrap();
        assert!(r.rows.iter().all(|row| row.dim == 1 && row.lattice_count == 1));
        assert_eq!(r.slice_volume, "1");
        let half = multiplicity_asymptotics(&bs, &DivisorClass::canonical(vec![1]), &[qf(1, 2)], 1, &None);
        assert_eq!(half, Err(Error::NonIntegralAll(1)));
        let out = multiplicity_asymptotics(&bs, &DivisorClass::canonical(vec![1]), &[q(3)], 2, &None);
        assert!(matches!(out, Err(Error::NotInterior(_))));
    }

    #[test]
    fn p1_slices_partition_lattice_points() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let d = DivisorClass::canonical(vec![3]);
        let delta = body(&bs, &d, 1).unwrap().polytope;
        let f = weight_projection(&weighted_semigroup(&bs, &d, 1, &None).unwrap()).unwrap();
        let total: usize = (0..=3)
            .map(|j| slice_lattice_count(&delta, &f, &[q(3 - 2 * j)], 1).unwrap())
            .sum();
        assert_eq!(total, 4);
    }
}

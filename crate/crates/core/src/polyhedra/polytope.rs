//! Rational polytopes with both representations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::{cone_from_constraints, normalize};
use crate::arith::{fmt_q, parse_q, q_int, Q};
use crate::linalg::{determinant, integer_kernel_basis, rank, solve};
use crate::{Error, Result};

/// A polytope in `Q^d`. Inequalities `a_0 + a . x >= 0` and equations
/// `a_0 + a . x = 0` are stored as `[a_0, a_1, ..., a_d]` with primitive
/// integer entries. The empty polytope has no vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolytope {
    pub ambient: usize,
    pub vertices: Vec<Vec<Q>>,
    pub inequalities: Vec<Vec<Q>>,
    pub equations: Vec<Vec<Q>>,
}

fn affine(a: &[Q], x: &[Q]) -> Q {
    &a[0] + a[1..].iter().zip(x).map(|(u, v)| u * v).sum::<Q>()
}

/// Affine dimension of a finite point set.
pub fn affine_rank(points: &[Vec<Q>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        0
    } else {
        rank(&diffs)
    }
}

impl RationalPolytope {
    pub fn empty(ambient: usize) -> Self {
        RationalPolytope { ambient, vertices: vec![], inequalities: vec![], equations: vec![] }
    }

    /// Convex hull of a finite point set.
    pub fn hull(points: &[Vec<Q>]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyInput);
        };
        let d = first.len();
        let mut pts: Vec<Vec<Q>> = points.to_vec();
        pts.sort();
        pts.dedup();
        // facets of cone{(1, p)} are the generators of its dual cone
        let homog: Vec<Vec<Q>> = pts
            .iter()
            .map(|p| std::iter::once(Q::from_integer(1.into())).chain(p.iter().cloned()).collect())
            .collect();
        let dual = cone_from_constraints(d + 1, &homog, &[]);
        let mut equations = canonical_equations(&dual.lineality);
        equations.sort();
        let mut inequalities: Vec<Vec<Q>> = dual
            .rays
            .iter()
            .map(|r| reduce_modulo(r, &equations))
            .filter(|a| a[1..].iter().any(|x| !x.is_zero()))
            .map(|a| normalize(&a))
            .collect();
        inequalities.sort();
        inequalities.dedup();
        let vertices = extreme_points(&pts, &inequalities, &equations, d);
        Ok(RationalPolytope { ambient: d, vertices, inequalities, equations })
    }

    /// The polytope `{x : a_0 + a . x >= 0, e_0 + e . x = 0}`; must be bounded.
    pub fn from_constraints(d: usize, ineqs: &[Vec<Q>], eqs: &[Vec<Q>]) -> Result<Self> {
        let mut cons: Vec<Vec<Q>> = ineqs.to_vec();
        let mut x0 = vec![Q::zero(); d + 1];
        x0[0] = Q::from_integer(1.into());
        cons.push(x0);
        let g = cone_from_constraints(d + 1, &cons, eqs);
        if !g.lineality.is_empty() || g.rays.iter().any(|r| r[0].is_zero()) {
            return Err(Error::Internal("unbounded polyhedron".into()));
        }
        let points: Vec<Vec<Q>> = g
            .rays
            .iter()
            .map(|r| r[1..].iter().map(|x| x / &r[0]).collect())
            .collect();
        if points.is_empty() {
            return Ok(Self::empty(d));
        }
        Self::hull(&points)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension (`-1` for the empty polytope).
    pub fn dim(&self) -> i64 {
        if self.is_empty() {
            -1
        } else {
            affine_rank(&self.vertices) as i64
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !self.is_empty()
            && self.inequalities.iter().all(|a| !affine(a, x).is_negative())
            && self.equations.iter().all(|a| affine(a, x).is_zero())
    }

    pub fn contains_polytope(&self, other: &RationalPolytope) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    /// Intersection with extra constraints.
    pub fn intersect(&self, ineqs: &[Vec<Q>], eqs: &[Vec<Q>]) -> Result<Self> {
        if self.is_empty() {
            return Ok(self.clone());
        }
        let mut i = self.inequalities.clone();
        i.extend(ineqs.iter().cloned());
        let mut e = self.equations.clone();
        e.extend(eqs.iter().cloned());
        Self::from_constraints(self.ambient, &i, &e)
    }

    /// `{x in P : L x + c = mu}` for an affine map given by rows of `L` and `c`.
    pub fn slice(&self, l: &[Vec<Q>], c: &[Q], mu: &[Q]) -> Result<Self> {
        let eqs: Vec<Vec<Q>> = l
            .iter()
            .zip(c)
            .zip(mu)
            .map(|((row, ci), m)| std::iter::once(ci - m).chain(row.iter().cloned()).collect())
            .collect();
        self.intersect(&[], &eqs)
    }

    /// Image under `x -> L x + c`.
    pub fn image(&self, l: &[Vec<Q>], c: &[Q]) -> Result<Self> {
        if self.is_empty() {
            return Ok(Self::empty(l.len()));
        }
        let pts: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|v| {
                l.iter()
                    .zip(c)
                    .map(|(row, ci)| ci + row.iter().zip(v).map(|(a, b)| a * b).sum::<Q>())
                    .collect()
            })
            .collect();
        Self::hull(&pts)
    }

    /// Euclidean volume in the ambient space (zero unless full-dimensional).
    pub fn volume(&self) -> Q {
        if self.dim() != self.ambient as i64 {
            return Q::zero();
        }
        simplices_volume(&self.vertices, &self.triangulate())
    }

    /// Volume inside the affine hull, normalized so that a fundamental domain
    /// of the integer lattice parallel to the hull has volume 1. Points have
    /// volume 1.
    pub fn relative_volume(&self) -> Q {
        if self.is_empty() {
            return Q::zero();
        }
        let k = self.dim() as usize;
        if k == 0 {
            return Q::from_integer(1.into());
        }
        let linear: Vec<Vec<Q>> = self.equations.iter().map(|e| e[1..].to_vec()).collect();
        let basis: Vec<Vec<Q>> = integer_kernel_basis(&linear, self.ambient)
            .iter()
            .map(|b| b.iter().map(q_int).collect())
            .collect();
        debug_assert_eq!(basis.len(), k);
        // columns: basis vectors
        let cols: Vec<Vec<Q>> = (0..self.ambient)
            .map(|i| basis.iter().map(|b| b[i].clone()).collect())
            .collect();
        let v0 = &self.vertices[0];
        let coords: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|v| {
                let rhs: Vec<Q> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
                solve(&cols, &rhs, k).expect("vertex lies in the affine hull")
            })
            .collect();
        let p = RationalPolytope::hull(&coords).expect("nonempty");
        p.volume()
    }

    /// A triangulation into simplices of full affine dimension, as index lists
    /// into `vertices`.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let tight: Vec<BTreeSet<usize>> = self
            .inequalities
            .iter()
            .map(|a| all.iter().cloned().filter(|&i| affine(a, &self.vertices[i]).is_zero()).collect())
            .collect();
        triangulate_face(&self.vertices, &all, &tight)
    }

    /// Integer points of `k P`, returned as points of `P` with denominator `k`.
    pub fn lattice_points(&self, k: u32) -> Vec<Vec<Q>> {
        if self.is_empty() || k == 0 {
            return vec![];
        }
        let kq = Q::from_integer(k.into());
        let d = self.ambient;
        let lo: Vec<BigInt> = (0..d)
            .map(|i| self.vertices.iter().map(|v| (&v[i] * &kq).ceil().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<BigInt> = (0..d)
            .map(|i| self.vertices.iter().map(|v| (&v[i] * &kq).floor().to_integer()).max().unwrap())
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return vec![];
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let x: Vec<Q> = cur.iter().map(|c| q_int(c) / &kq).collect();
            if self.contains(&x) {
                out.push(x);
            }
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i].clone();
                i += 1;
            }
            if d == 0 {
                return out;
            }
        }
    }

    /// Minkowski sum.
    pub fn minkowski_sum(&self, o: &RationalPolytope) -> Result<Self> {
        if self.is_empty() || o.is_empty() {
            return Ok(Self::empty(self.ambient));
        }
        let pts: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .flat_map(|a| o.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        Self::hull(&pts)
    }

    /// Checks that the stored H-representation reproduces the vertices.
    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Ok(());
        }
        let again = Self::from_constraints(self.ambient, &self.inequalities, &self.equations)?;
        if again.vertices != self.vertices {
            return Err(Error::VerificationFailure("V/H representations disagree".into()));
        }
        let from_v = Self::hull(&self.vertices)?;
        if from_v != *self {
            return Err(Error::VerificationFailure("H-representation is not canonical".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<Vec<[String; 2]>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| [x.numer().to_string(), x.denom().to_string()]).collect())
            .collect();
        let ints = |rows: &[Vec<Q>]| -> Vec<Vec<String>> {
            rows.iter().map(|r| r.iter().map(fmt_q).collect()).collect()
        };
        serde_json::json!({
            "ambient": self.ambient,
            "dim": self.dim(),
            "vertices": vertices,
            "inequalities": ints(&self.inequalities),
            "equations": ints(&self.equations),
        })
    }

    /// Parses the output of [`to_json`](Self::to_json) and re-validates it.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let parse_err = |m: &str| Error::Json(m.to_string());
        let file: PolytopeFile = serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
        let vertices = file
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|[n, d]| {
                        let n: BigInt = n.parse().map_err(|_| parse_err("bad numerator"))?;
                        let d: BigInt = d.parse().map_err(|_| parse_err("bad denominator"))?;
                        if d.is_zero() {
                            return Err(parse_err("zero denominator"));
                        }
                        Ok(Q::new(n, d))
                    })
                    .collect::<Result<Vec<Q>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = |r: &[Vec<String>]| -> Result<Vec<Vec<Q>>> {
            r.iter()
                .map(|row| row.iter().map(|s| parse_q(s).ok_or_else(|| parse_err("bad number"))).collect())
                .collect()
        };
        let p = RationalPolytope {
            ambient: file.ambient,
            vertices,
            inequalities: rows(&file.inequalities)?,
            equations: rows(&file.equations)?,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Deserialize, Serialize)]
struct PolytopeFile {
    ambient: usize,
    vertices: Vec<Vec<[String; 2]>>,
    inequalities: Vec<Vec<String>>,
    #[serde(default)]
    equations: Vec<Vec<String>>,
}

/// Lineality generators of the dual cone, reduced to a canonical basis.
fn canonical_equations(lin: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if lin.is_empty() {
        return vec![];
    }
    // reduced row echelon form with the constant column last so that
    // equations are solved for the leading coordinates
    let d = lin[0].len();
    let mut rows: Vec<Vec<Q>> = lin
        .iter()
        .map(|r| r[1..].iter().cloned().chain(std::iter::once(r[0].clone())).collect())
        .collect();
    let piv = crate::linalg::rref(&mut rows);
    rows.truncate(piv.len());
    rows.iter()
        .map(|r| {
            let back: Vec<Q> = std::iter::once(r[d - 1].clone()).chain(r[..d - 1].iter().cloned()).collect();
            normalize(&back)
        })
        .collect()
}

/// Reduces an affine form modulo the (row-reduced) equations: the leading
/// linear coordinate of every equation is eliminated.
fn reduce_modulo(a: &[Q], eqs: &[Vec<Q>]) -> Vec<Q> {
    let mut a = a.to_vec();
    for e in eqs {
        let Some(p) = (1..e.len()).find(|&i| !e[i].is_zero()) else { continue };
        if a[p].is_zero() {
            continue;
        }
        let c = &a[p] / &e[p];
        for (x, y) in a.iter_mut().zip(e) {
            *x -= &c * y;
        }
    }
    a
}

fn extreme_points(pts: &[Vec<Q>], ineqs: &[Vec<Q>], eqs: &[Vec<Q>], d: usize) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = pts
        .iter()
        .filter(|p| {
            let mut rows: Vec<Vec<Q>> = eqs.iter().map(|e| e[1..].to_vec()).collect();
            rows.extend(ineqs.iter().filter(|a| affine(a, p).is_zero()).map(|a| a[1..].to_vec()));
            rows.is_empty() && d == 0 || !rows.is_empty() && rank(&rows) == d
        })
        .cloned()
        .collect();
    if out.is_empty() && !pts.is_empty() && d == 0 {
        out.push(pts[0].clone());
    }
    out.sort();
    out.dedup();
    out
}

/// Pulling triangulation of the face with vertex set `face`.
fn triangulate_face(verts: &[Vec<Q>], face: &[usize], tight: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let pts: Vec<Vec<Q>> = face.iter().map(|&i| verts[i].clone()).collect();
    let k = affine_rank(&pts);
    if k == 0 {
        return vec![vec![face[0]]];
    }
    let apex = face[0];
    let face_set: BTreeSet<usize> = face.iter().cloned().collect();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for t in tight {
        let sub: Vec<usize> = face_set.intersection(t).cloned().collect();
        if sub.is_empty() || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        let sp: Vec<Vec<Q>> = sub.iter().map(|&i| verts[i].clone()).collect();
        if affine_rank(&sp) == k - 1 {
            facets.insert(sub);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut s in triangulate_face(verts, &f, tight) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

fn simplices_volume(verts: &[Vec<Q>], simplices: &[Vec<usize>]) -> Q {
    let d = verts.first().map_or(0, |v| v.len());
    let fact = Q::from_integer(crate::arith::factorial(d));
    simplices
        .iter()
        .map(|s| {
            let v0 = &verts[s[0]];
            let m: Vec<Vec<Q>> = s[1..]
                .iter()
                .map(|&i| verts[i].iter().zip(v0).map(|(a, b)| a - b).collect())
                .collect();
            determinant(&m).abs() / &fact
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn p(x: &[(i64, i64)]) -> Vec<Q> {
        x.iter().map(|&(a, b)| qf(a, b)).collect()
    }

    fn pts(x: &[&[i64]]) -> Vec<Vec<Q>> {
        x.iter().map(|v| v.iter().map(|&a| q(a)).collect()).collect()
    }

    #[test]
    fn triangle_drops_interior_point() {
        let mut points = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        points.push(p(&[(1, 2), (1, 4)]));
        let t = RationalPolytope::hull(&points).unwrap();
        assert_eq!(t.vertices.len(), 3);
        assert_eq!(t.dim(), 2);
        assert_eq!(t.volume(), qf(1, 2));
    }

    #[test]
    fn square_and_center() {
        let sq = RationalPolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let mut with_c = sq.vertices.clone();
        with_c.push(p(&[(1, 2), (1, 2)]));
        let again = RationalPolytope::hull(&with_c).unwrap();
        assert_eq!(again, sq);
        assert_eq!(sq.volume(), q(1));
        assert_eq!(sq.inequalities.len(), 4);
        sq.validate().unwrap();
    }

    #[test]
    fn point_and_segment() {
        let pt = RationalPolytope::hull(&[p(&[(1, 3), (2, 1)])]).unwrap();
        assert_eq!(pt.vertices.len(), 1);
        assert_eq!(pt.dim(), 0);
        assert_eq!(pt.relative_volume(), q(1));
        pt.validate().unwrap();
        let seg = RationalPolytope::hull(&pts(&[&[0, 0], &[2, 2], &[1, 1]])).unwrap();
        assert_eq!(seg.vertices, pts(&[&[0, 0], &[2, 2]]));
        assert_eq!(seg.volume(), q(0));
        assert_eq!(seg.relative_volume(), q(2));
        seg.validate().unwrap();
    }

    #[test]
    fn slicing() {
        let sq = RationalPolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let l = vec![vec![q(0), q(1)]];
        let mid = sq.slice(&l, &[q(0)], &[qf(1, 2)]).unwrap();
        assert_eq!(mid.vertices, vec![p(&[(0, 1), (1, 2)]), p(&[(1, 1), (1, 2)])]);
        assert_eq!(mid.relative_volume(), q(1));
        let diag = vec![vec![q(1), q(1)]];
        assert_eq!(sq.slice(&diag, &[q(0)], &[q(2)]).unwrap().vertices, pts(&[&[1, 1]]));
        assert!(sq.slice(&l, &[q(0)], &[q(3)]).unwrap().is_empty());
    }

    #[test]
    fn lattice_enumeration() {
        let seg = RationalPolytope::hull(&pts(&[&[0], &[1]])).unwrap();
        assert_eq!(seg.lattice_points(2), vec![p(&[(0, 1)]), p(&[(1, 2)]), p(&[(1, 1)])]);
        let tri = RationalPolytope::hull(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        assert_eq!(tri.lattice_points(1).len(), 3);
        assert!(RationalPolytope::empty(2).lattice_points(3).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let tri = RationalPolytope::hull(&[p(&[(0, 1), (0, 1)]), p(&[(1, 2), (0, 1)]), p(&[(0, 1), (3, 1)])]).unwrap();
        let back = RationalPolytope::from_json(&tri.to_json()).unwrap();
        assert_eq!(back, tri);
        let mut bad = tri.to_json();
        bad["vertices"][0][0] = serde_json::json!(["5", "1"]);
        assert!(RationalPolytope::from_json(&bad).is_err());
    }

    #[test]
    fn cube_volume_and_minkowski() {
        let cube = RationalPolytope::hull(&pts(&[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1],
        ]))
        .unwrap();
        assert_eq!(cube.volume(), q(1));
        let two = cube.minkowski_sum(&cube).unwrap();
        assert_eq!(two.volume(), q(8));
    }
}

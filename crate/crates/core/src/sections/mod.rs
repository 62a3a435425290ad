//! Global sections of line bundles on `Z_w`, realised as polynomials on the
//! big cell.
//!
//! Two independent constructions are provided: [`nef`] spans `H^0` of a nef
//! class by products of matrix coefficients, and [`glue`] solves for the
//! polynomials that stay regular along every boundary divisor at infinity.

pub mod charts;
pub mod equivariance;
pub mod glue;
pub mod nef;
pub mod peel;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Q;
use crate::bs::BottSamelson;
use crate::picard::DivisorClass;
use crate::poly::Poly;
use crate::rep::Rep;
use crate::rootsys::Weight;
use crate::{Error, Result};

pub use glue::section_basis_glue;
pub use nef::section_basis_nef;
pub use peel::{fixed_part_peel, PeelResult};

/// A section on the big cell with its bundle (canonical coordinates) and torus weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionPoly {
    pub poly: Poly,
    pub class: DivisorClass,
    pub weight: Weight,
}

/// An ordered basis of `H^0(Z_w, O(m))`, sorted by `(weight, lex-min monomial)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionBasis {
    pub word: Vec<usize>,
    pub class: DivisorClass,
    pub sections: Vec<SectionPoly>,
}

impl SectionBasis {
    pub fn dim(&self) -> usize {
        self.sections.len()
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.sections.iter().map(|s| s.poly.clone()).collect()
    }
}

/// `exp(t_j f_i)` applied to a vector of polynomials in a representation.
fn apply_exp_f(rep: &Rep, i: usize, j: usize, v: &[Poly]) -> Vec<Poly> {
    let nvars = v.first().map_or(0, |p| p.nvars);
    let mut acc = v.to_vec();
    let mut term = v.to_vec();
    for r in 1.. {
        let mut next = vec![Poly::zero(nvars); v.len()];
        for (b, col) in rep.f[i - 1].iter().enumerate() {
            if term[b].is_zero() {
                continue;
            }
            for (x, c) in col {
                next[*x].add_assign_scaled(&term[b], c);
            }
        }
        if next.iter().all(|p| p.is_zero()) {
            break;
        }
        let scale = Q::one() / Q::from_integer(r.into());
        let tj = Poly::var(nvars, j);
        term = next.iter().map(|p| p.mul(&tj).scale(&scale)).collect();
        for (a, t) in acc.iter_mut().zip(&term) {
            a.add_assign_scaled(t, &Q::one());
        }
    }
    acc
}

/// Components of `exp(t_1 f_{i_1}) ... exp(t_k f_{i_k}) v_{omega_{i_k}}` in the
/// weight basis of `V_{omega_{i_k}}`.
pub fn cell_vector(bs: &BottSamelson, k: usize) -> Result<Vec<Poly>> {
    if k == 0 || k > bs.n() {
        return Err(Error::IndexOutOfRange { index: k, max: bs.n() });
    }
    let rep = bs.group.rep(bs.word[k - 1]);
    let mut v = vec![Poly::zero(bs.n()); rep.dim()];
    v[rep.highest] = Poly::one(bs.n());
    for j in (1..=k).rev() {
        v = apply_exp_f(rep, bs.word[j - 1], j, &v);
    }
    Ok(v)
}

/// The matrix coefficient `<xi, exp(t_1 f_{i_1}) ... exp(t_k f_{i_k}) v>` for the
/// dual basis covector `xi` (an index into the weight basis of `V_{omega_{i_k}}`).
///
/// The result may be the zero polynomial; its weight is the weight of `xi`
/// and its class the `k`-th canonical unit vector.
pub fn cell_polynomial(bs: &BottSamelson, k: usize, xi: usize) -> Result<SectionPoly> {
    let v = cell_vector(bs, k)?;
    let rep = bs.group.rep(bs.word[k - 1]);
    if xi >= rep.dim() {
        return Err(Error::IndexOutOfRange { index: xi, max: rep.dim() - 1 });
    }
    let mut class = vec![0; bs.n()];
    class[k - 1] = 1;
    Ok(SectionPoly {
        poly: v[xi].clone(),
        class: DivisorClass::canonical(class),
        weight: rep.weights[xi].clone(),
    })
}

/// The section `t_j` of `O(Z_{w(j)})`, whose divisor is exactly the boundary
/// divisor `Z_{w(j)}`; its class comes from the chart computation.
pub fn boundary_section(bs: &BottSamelson, j: usize) -> Result<SectionPoly> {
    if j == 0 || j > bs.n() {
        return Err(Error::IndexOutOfRange { index: j, max: bs.n() });
    }
    let mut e = vec![0; bs.n()];
    e[j - 1] = 1;
    let class = DivisorClass::effective(e).to_canonical(bs)?;
    let mut a = vec![0u32; bs.n()];
    a[j - 1] = 1;
    let weight = bs.monomial_weight(&class.coords, &a);
    Ok(SectionPoly { poly: Poly::var(bs.n(), j), class, weight })
}

/// Any basis of `H^0(O(D))`: the product construction for nef classes (with
/// the gluing solver as fallback on span deficiency), the gluing solver for
/// other effective classes, and the empty basis for non-effective ones.
pub fn sections(bs: &BottSamelson, d: &DivisorClass) -> Result<Arc<SectionBasis>> {
    let can = d.to_canonical(bs)?;
    if can.coords.iter().all(|&x| x >= 0) {
        match section_basis_nef(bs, &can) {
            Ok(b) => return Ok(Arc::new(b)),
            Err(Error::SpanDeficiency { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let eff = d.to_effective(bs)?;
    if eff.coords.iter().any(|&x| x < 0) {
        return Ok(Arc::new(SectionBasis { word: bs.word.clone(), class: can, sections: vec![] }));
    }
    section_basis_glue(bs, &eff)
}

/// `dim H^0(O(D))`, from the character when nef.
pub fn h0_dim(bs: &BottSamelson, d: &DivisorClass) -> Result<usize> {
    let can = d.to_canonical(bs)?;
    if can.coords.iter().all(|&x| x >= 0) {
        return Ok(bs.cartan.bs_character(&bs.word, &can.coords)?.dim() as usize);
    }
    Ok(sections(bs, d)?.dim())
}

/// Dimension of the span of a list of polynomials.
pub fn span_rank(polys: &[Poly]) -> usize {
    let mut ech = Echelon::default();
    for (id, p) in polys.iter().enumerate() {
        ech.insert(p.clone(), id);
    }
    ech.rank()
}

/// Reduced row echelon form of polynomials where each row's pivot is its
/// lex-min monomial; the pivots are then the valuation vectors.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    pub rows: Vec<Poly>,
    pub pivots: Vec<Vec<u32>>,
    /// Optional bookkeeping: each row as a combination of inserted items.
    pub prov: Vec<Vec<(usize, Q)>>,
}

impl Echelon {
    /// Inserts `p` (tagged `id` for provenance); returns whether the rank grew.
    pub fn insert(&mut self, mut p: Poly, id: usize) -> bool {
        let mut prov: Vec<(usize, Q)> = vec![(id, Q::one())];
        for idx in 0..self.rows.len() {
            let c = p.coeff(&self.pivots[idx]);
            if !c.is_zero() {
                p.add_assign_scaled(&self.rows[idx], &-c.clone());
                add_prov(&mut prov, &self.prov[idx], &-c);
            }
        }
        let Some(pivot) = p.lex_min().cloned() else {
            return false;
        };
        let inv = Q::one() / p.coeff(&pivot);
        p = p.scale(&inv);
        for x in prov.iter_mut() {
            x.1 = &x.1 * &inv;
        }
        for (row, rp) in self.rows.iter_mut().zip(self.prov.iter_mut()) {
            let c = row.coeff(&pivot);
            if !c.is_zero() {
                row.add_assign_scaled(&p, &-c.clone());
                add_prov(rp, &prov, &-c);
            }
        }
        self.rows.push(p);
        self.pivots.push(pivot);
        self.prov.push(prov);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot, with their provenance.
    pub fn into_sorted(self) -> Vec<(Vec<u32>, Poly, Vec<(usize, Q)>)> {
        let mut v: Vec<_> = self
            .pivots
            .into_iter()
            .zip(self.rows)
            .zip(self.prov)
            .map(|((a, b), c)| (a, b, c))
            .collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v
    }
}

fn add_prov(dst: &mut Vec<(usize, Q)>, src: &[(usize, Q)], c: &Q) {
    for (id, x) in src {
        let v = x * c;
        match dst.iter_mut().find(|(j, _)| j == id) {
            Some(e) => e.1 += v,
            None => dst.push((*id, v)),
        }
    }
    dst.retain(|(_, x)| !x.is_zero());
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn a1_cell_polynomials() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let rep = bs.group.rep(1);
        let hi = cell_polynomial(&bs, 1, rep.highest).unwrap();
        assert_eq!(hi.poly, Poly::one(1));
        assert_eq!(hi.weight, vec![1]);
        let lo = 1 - rep.highest;
        let p = cell_polynomial(&bs, 1, lo).unwrap();
        assert_eq!(p.poly, Poly::var(1, 1));
        // weight(t_1) = -alpha_1 + omega_1
        assert_eq!(p.weight, vec![-1]);
    }

    #[test]
    fn a2_cell_polynomials() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let v = cell_vector(&bs, 2).unwrap();
        let nonzero: Vec<&Poly> = v.iter().filter(|p| !p.is_zero()).collect();
        assert_eq!(nonzero.len(), 3);
        let rep = bs.group.rep(2);
        // Covector of weight s_1 s_2 omega_2 = (-1, 0) gives t_1 t_2.
        let idx = rep.weights.iter().position(|w| *w == vec![-1, 0]).unwrap();
        let p = cell_polynomial(&bs, 2, idx).unwrap();
        assert_eq!(p.poly, Poly::monomial(vec![1, 1], q(1)));
        let idx = rep.weights.iter().position(|w| *w == vec![1, -1]).unwrap();
        assert_eq!(cell_polynomial(&bs, 2, idx).unwrap().poly, Poly::var(2, 2));
    }

    #[test]
    fn echelon_pivots_are_lex_minimal() {
        let mut e = Echelon::default();
        let one = Poly::one(1);
        let t = Poly::var(1, 1);
        assert!(e.insert(one.clone(), 0));
        assert!(e.insert(one.add(&t), 1));
        assert!(!e.insert(t.scale(&q(3)), 2));
        let rows = e.into_sorted();
        assert_eq!(rows[0].1, one);
        assert_eq!(rows[1].1, t);
        assert_eq!(rows[1].2, vec![(1, q(1)), (0, q(-1))]);
    }
}

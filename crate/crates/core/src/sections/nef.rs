//! Sections of nef classes spanned by products of matrix coefficients.
//!
//! `H^0(O(m + e_k))` is built from `H^0(O(m))` by multiplying with the cell
//! polynomials of the `k`-th factor, one weight space at a time, until each
//! weight space reaches the multiplicity predicted by the Demazure
//! character. Every basis element remembers how it was produced, so it can
//! be evaluated as a genuine function on `P_{i_1} x ... x P_{i_n}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::arith::Q;
use crate::bs::BottSamelson;
use crate::picard::DivisorClass;
use crate::poly::Poly;
use crate::rootsys::Weight;
use crate::sections::{cell_vector, Echelon, SectionBasis, SectionPoly};
use crate::{Error, Result};

/// One basis element of `H^0(O(m))` expressed through the parent class:
/// `sum coef * parent_section * cell_polynomial(k, xi)`.
pub type Provenance = Vec<(Q, usize, usize)>;

#[derive(Clone, Debug)]
pub struct NefSpace {
    pub class: Vec<i64>,
    /// `(parent class, k)` with `class = parent + e_k`; `None` for the zero class.
    pub parent: Option<(Vec<i64>, usize)>,
    pub sections: Vec<Poly>,
    pub weights: Vec<Weight>,
    pub provenance: Vec<Provenance>,
}

impl NefSpace {
    pub fn dim(&self) -> usize {
        self.sections.len()
    }

    pub fn to_basis(&self, bs: &BottSamelson) -> SectionBasis {
        let class = DivisorClass::canonical(self.class.clone());
        SectionBasis {
            word: bs.word.clone(),
            class: class.clone(),
            sections: self
                .sections
                .iter()
                .zip(&self.weights)
                .map(|(p, w)| SectionPoly { poly: p.clone(), class: class.clone(), weight: w.clone() })
                .collect(),
        }
    }
}

/// Basis of `H^0(O(m))` for nef `m` (canonical coordinates), by exact rank
/// computation over products of cell polynomials.
pub fn section_basis_nef(bs: &BottSamelson, m: &DivisorClass) -> Result<SectionBasis> {
    let can = m.to_canonical(bs)?;
    Ok(nef_space(bs, &can.coords)?.to_basis(bs))
}

/// Predecessor on the construction path: drop one unit from the largest
/// coordinate (ties broken towards the last index). Multiples of a class
/// then pass through each other's balanced intermediates and share work.
fn predecessor(m: &[i64]) -> usize {
    let mut best = 0;
    for k in 0..m.len() {
        if m[k] >= m[best] {
            best = k;
        }
    }
    best
}

pub fn nef_space(bs: &BottSamelson, m: &[i64]) -> Result<Arc<NefSpace>> {
    bs.check_len(m)?;
    if m.iter().any(|&x| x < 0) {
        return Err(Error::NotNef(m.to_vec()));
    }
    // Walk down to the nearest cached (or zero) class, then build upwards.
    let mut chain: Vec<Vec<i64>> = Vec::new();
    let mut cur = m.to_vec();
    let mut base: Arc<NefSpace>;
    loop {
        if let Some(s) = bs.nef_cache.lock().unwrap().get(&cur) {
            base = s.clone();
            break;
        }
        if cur.iter().all(|&x| x == 0) {
            base = Arc::new(NefSpace {
                class: cur.clone(),
                parent: None,
                sections: vec![Poly::one(bs.n())],
                weights: vec![vec![0; bs.cartan.rank]],
                provenance: vec![vec![]],
            });
            bs.nef_cache.lock().unwrap().insert(cur.clone(), base.clone());
            break;
        }
        chain.push(cur.clone());
        let k = predecessor(&cur);
        cur[k] -= 1;
    }
    let mut cells: HashMap<usize, Vec<(usize, Poly, Weight)>> = HashMap::new();
    for target in chain.into_iter().rev() {
        let k = (0..bs.n()).find(|&k| target[k] != base.class[k]).unwrap() + 1;
        let cell = match cells.get(&k) {
            Some(c) => c.clone(),
            None => {
                let rep = bs.group.rep(bs.word[k - 1]);
                let v = cell_vector(bs, k)?;
                let c: Vec<(usize, Poly, Weight)> = v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(xi, p)| (xi, p, rep.weights[xi].clone()))
                    .collect();
                cells.insert(k, c.clone());
                c
            }
        };
        let next = Arc::new(extend(bs, &base, &target, k, &cell)?);
        bs.nef_cache.lock().unwrap().insert(target.clone(), next.clone());
        base = next;
    }
    Ok(base)
}

fn extend(
    bs: &BottSamelson,
    parent: &NefSpace,
    target: &[i64],
    k: usize,
    cell: &[(usize, Poly, Weight)],
) -> Result<NefSpace> {
    let ch = bs.cartan.bs_character(&bs.word, target)?;
    let mut parents_by_weight: BTreeMap<&Weight, Vec<usize>> = BTreeMap::new();
    for (idx, w) in parent.weights.iter().enumerate() {
        parents_by_weight.entry(w).or_default().push(idx);
    }
    let wanted: Vec<(&Weight, i64)> = ch.iter().map(|(w, &c)| (w, c)).collect();
    let spaces: Vec<Result<(Weight, Vec<(Poly, Provenance)>)>> = wanted
        .par_iter()
        .map(|&(mu, mult)| {
            if mult < 0 {
                return Err(Error::Internal(format!("negative multiplicity at {mu:?}")));
            }
            let mult = mult as usize;
            let mut ech = Echelon::default();
            let mut cands: Vec<(usize, usize)> = Vec::new();
            'outer: for (xi, cp, nu) in cell {
                let need: Weight = mu.iter().zip(nu).map(|(a, b)| a - b).collect();
                let Some(ps) = parents_by_weight.get(&need) else { continue };
                for &pidx in ps {
                    if ech.rank() == mult {
                        break 'outer;
                    }
                    let prod = parent.sections[pidx].mul(cp);
                    cands.push((pidx, *xi));
                    ech.insert(prod, cands.len() - 1);
                }
            }
            if ech.rank() < mult {
                return Err(Error::SpanDeficiency { class: target.to_vec(), rank: ech.rank(), expected: mult });
            }
            let rows = ech
                .into_sorted()
                .into_iter()
                .map(|(_, p, prov)| {
                    let pr: Provenance = prov.into_iter().map(|(id, c)| (c, cands[id].0, cands[id].1)).collect();
                    (p, pr)
                })
                .collect();
            Ok((mu.clone(), rows))
        })
        .collect();
    let mut out = NefSpace {
        class: target.to_vec(),
        parent: Some((parent.class.clone(), k)),
        sections: vec![],
        weights: vec![],
        provenance: vec![],
    };
    for s in spaces {
        let (mu, rows) = s?;
        for (p, pr) in rows {
            out.sections.push(p);
            out.weights.push(mu.clone());
            out.provenance.push(pr);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn a1_monomial_basis() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        for d in 0..5 {
            let b = section_basis_nef(&bs, &DivisorClass::canonical(vec![d])).unwrap();
            let mut polys: Vec<Poly> = b.polys();
            polys.sort_by(|a, b| a.lex_min().cmp(&b.lex_min()));
            let want: Vec<Poly> = (0..=d as u32).map(|j| Poly::monomial(vec![j], q(1))).collect();
            assert_eq!(polys, want);
        }
    }

    #[test]
    fn zero_class_is_constant() {
        let bs = BottSamelson::from_type("A2", &[1, 2, 1]).unwrap();
        let b = section_basis_nef(&bs, &DivisorClass::canonical(vec![0, 0, 0])).unwrap();
        assert_eq!(b.polys(), vec![Poly::one(3)]);
    }

    #[test]
    fn a2_dimension_three() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let b = section_basis_nef(&bs, &DivisorClass::canonical(vec![0, 1])).unwrap();
        assert_eq!(b.dim(), 3);
        let lex: Vec<Vec<u32>> = b.sections.iter().map(|s| s.poly.lex_min().unwrap().clone()).collect();
        let mut sorted = lex.clone();
        sorted.sort();
        assert_eq!(sorted, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }
}

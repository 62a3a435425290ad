//! Sections as polynomials on the big cell that extend across the boundary.
//!
//! `Z_w` is smooth, so a polynomial `s(t)` is a global section of `O(c)` iff
//! it has no pole along any divisor `E_k` of the complement of the big cell.
//! Along a test curve through a generic point of `E_k` the section reads
//! `chi(u) s(t(u))` with `chi = prod_{j >= k} omega_{i_j}(beta_j)^{c_j}`; the
//! coefficients of negative powers of `u`, separately for every monomial in
//! the free variables `t_1, ..., t_{k-1}`, give linear conditions.
//!
//! The search space is a degree box `[0, B]^n`, enlarged while solutions
//! touch its boundary or the dimension changes between `B` and `B + 1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{Laurent, RatFunc, Q};
use crate::bs::BottSamelson;
use crate::linalg::{kernel, rank};
use crate::picard::DivisorClass;
use crate::poly::{Exponent, Poly};
use crate::sections::{Echelon, SectionBasis, SectionPoly};
use crate::{Error, Result};

pub const BOX_CAP: u32 = 64;
const MAX_CURVES: usize = 6;

/// Basis of `H^0(O(m))` for an effective class, by the gluing conditions.
pub fn section_basis_glue(bs: &BottSamelson, m: &DivisorClass) -> Result<Arc<SectionBasis>> {
    let eff = m.to_effective(bs)?;
    if eff.coords.iter().any(|&x| x < 0) {
        return Err(Error::NotEffective(eff.coords));
    }
    let can = m.to_canonical(bs)?;
    if let Some(b) = bs.glue_cache.lock().unwrap().get(&can.coords) {
        return Ok(b.clone());
    }
    let c = &can.coords;
    let mut b = (c.iter().map(|x| x.unsigned_abs()).sum::<u64>() as u32 + 2).min(BOX_CAP);
    loop {
        let polys = solve_box(bs, c, b)?;
        let touches = polys.iter().any(|p| {
            p.terms().any(|(e, _)| e.iter().any(|&x| x >= b))
        });
        let stable = !touches && solve_box(bs, c, b + 1)?.len() == polys.len();
        if stable {
            let basis = Arc::new(SectionBasis {
                word: bs.word.clone(),
                class: can.clone(),
                sections: polys
                    .into_iter()
                    .map(|p| {
                        let a = p.lex_min().unwrap().clone();
                        SectionPoly { weight: bs.monomial_weight(c, &a), poly: p, class: can.clone() }
                    })
                    .collect(),
            });
            bs.glue_cache.lock().unwrap().insert(can.coords.clone(), basis.clone());
            return Ok(basis);
        }
        if b >= BOX_CAP {
            return Err(Error::Unstable(format!("degree box reached cap {BOX_CAP} for class {c:?}")));
        }
        b = (b * 2).min(BOX_CAP);
    }
}

/// Laurent data of one test curve for a fixed class and box.
struct CurveSeries {
    k: usize,
    chi: Laurent,
    /// `pows[j - k][b]` = `t_j(u)^b`
    pows: Vec<Vec<Laurent>>,
}

fn laurent_of(f: &RatFunc, prec: usize) -> Option<Laurent> {
    f.laurent(prec).map(|(order, coeffs)| Laurent { order, coeffs })
}

fn curve_series(bs: &BottSamelson, c: &[i64], k: usize, r: usize, b: u32) -> Result<CurveSeries> {
    let curve = bs.curve(k, r)?;
    let n = bs.n();
    // chi as an exact rational function, then expanded
    let mut chi = RatFunc::constant(Q::from_integer(1.into()));
    for j in k..=n {
        let a = &curve.a[j - k];
        let e = c[j - 1];
        let base = if e >= 0 { a.clone() } else { a.inv() };
        for _ in 0..e.unsigned_abs() {
            chi = chi * base.clone();
        }
    }
    let ord_chi = chi.order_at_zero().ok_or_else(|| Error::Internal("zero character".into()))?;
    let mut worst = ord_chi;
    for j in k..=n {
        if let Some(o) = curve.t[j - k].order_at_zero() {
            worst += (b as i64) * o.min(0);
        }
    }
    let prec = (-worst).max(1) as usize;
    let chi_s = laurent_of(&chi, prec).unwrap();
    let mut pows = Vec::new();
    for j in k..=n {
        let t = &curve.t[j - k];
        let mut v = vec![Laurent::one(prec)];
        match laurent_of(t, prec) {
            Some(ts) => {
                for e in 1..=b as usize {
                    let next = v[e - 1].mul(&ts, prec);
                    v.push(next);
                }
            }
            None => {
                for _ in 1..=b {
                    v.push(Laurent { order: 0, coeffs: vec![Q::zero(); prec] });
                }
            }
        }
        pows.push(v);
    }
    Ok(CurveSeries { k, chi: chi_s, pows })
}

/// Polar part of `chi * t(u)^a` on a curve of chart `k`: `(prefix, [(power, coeff)])`.
fn polar_part(cs: &CurveSeries, a: &[u32]) -> Vec<(i64, Q)> {
    let k = cs.k;
    let mut order = cs.chi.order;
    for (off, &e) in a[k - 1..].iter().enumerate() {
        let p = &cs.pows[off][e as usize];
        if p.coeffs.iter().all(|x| x.is_zero()) {
            return vec![];
        }
        order += p.order;
    }
    if order >= 0 {
        return vec![];
    }
    let need = (-order) as usize;
    let mut acc = cs.chi.clone();
    for (off, &e) in a[k - 1..].iter().enumerate() {
        if e > 0 {
            acc = acc.mul(&cs.pows[off][e as usize], need);
        }
    }
    (0..need)
        .filter_map(|i| {
            let x = acc.coeffs.get(i).cloned().unwrap_or_else(Q::zero);
            (!x.is_zero()).then(|| (acc.order + i as i64, x))
        })
        .collect()
}

/// All sections of `O(c)` (canonical coordinates) with exponents in `[0, b]^n`,
/// in reduced echelon form per weight space.
pub(crate) fn solve_box(bs: &BottSamelson, c: &[i64], b: u32) -> Result<Vec<Poly>> {
    let n = bs.n();
    if n == 0 {
        return Ok(vec![Poly::one(0)]);
    }
    // Along E_n the test curve is exact (t_n = 1/u, character -u), so no
    // monomial with a_n > c_n can occur.
    let top_n = c[n - 1].min(b as i64);
    if top_n < 0 {
        return Ok(vec![]);
    }
    let rank_g = bs.cartan.rank;
    let mut groups: BTreeMap<Vec<u32>, Vec<Exponent>> = BTreeMap::new();
    let mut a = vec![0u32; n];
    loop {
        if (a[n - 1] as i64) <= top_n {
            let mut key = vec![0u32; rank_g];
            for j in 0..n {
                key[bs.word[j] - 1] += a[j];
            }
            groups.entry(key).or_default().push(a.clone());
        }
        // odometer
        let mut j = 0;
        loop {
            if j == n {
                break;
            }
            if a[j] < b {
                a[j] += 1;
                break;
            }
            a[j] = 0;
            j += 1;
        }
        if j == n {
            break;
        }
    }
    let cache: Mutex<HashMap<(usize, usize), Arc<CurveSeries>>> = Mutex::new(HashMap::new());
    let series = |k: usize, r: usize| -> Result<Arc<CurveSeries>> {
        if let Some(s) = cache.lock().unwrap().get(&(k, r)) {
            return Ok(s.clone());
        }
        let s = Arc::new(curve_series(bs, c, k, r, b)?);
        cache.lock().unwrap().insert((k, r), s.clone());
        Ok(s)
    };
    let groups: Vec<Vec<Exponent>> = groups.into_values().collect();
    let results: Vec<Result<Vec<Poly>>> = groups
        .par_iter()
        .map(|monos| solve_group(n, monos, &series))
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

type RowKey = (usize, usize, Vec<u32>, i64);

fn solve_group(
    n: usize,
    monos: &[Exponent],
    series: &(dyn Fn(usize, usize) -> Result<Arc<CurveSeries>> + Sync),
) -> Result<Vec<Poly>> {
    let mut rows: BTreeMap<RowKey, Vec<Q>> = BTreeMap::new();
    let add_curve = |rows: &mut BTreeMap<RowKey, Vec<Q>>, k: usize, r: usize| -> Result<()> {
        let cs = series(k, r)?;
        for (col, a) in monos.iter().enumerate() {
            let prefix = a[..k - 1].to_vec();
            for (pw, x) in polar_part(&cs, a) {
                rows.entry((k, r, prefix.clone(), pw))
                    .or_insert_with(|| vec![Q::zero(); monos.len()])[col] = x;
            }
        }
        Ok(())
    };
    add_curve(&mut rows, n, 0)?;
    let mut prev: Option<usize> = None;
    for r in 0..MAX_CURVES {
        for k in 1..n {
            add_curve(&mut rows, k, r)?;
        }
        let mat: Vec<Vec<Q>> = rows.values().cloned().collect();
        let dim = monos.len() - rank(&mat);
        if n == 1 || prev == Some(dim) {
            let ker = kernel(&mat, monos.len());
            let mut ech = Echelon::default();
            for (id, v) in ker.into_iter().enumerate() {
                let p = Poly::from_terms(n, monos.iter().cloned().zip(v));
                ech.insert(p, id);
            }
            return Ok(ech.into_sorted().into_iter().map(|(_, p, _)| p).collect());
        }
        prev = Some(dim);
    }
    Err(Error::Unstable("gluing conditions did not stabilize over test curves".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn p1_sections() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        for d in 0..6 {
            let b = section_basis_glue(&bs, &DivisorClass::effective(vec![d])).unwrap();
            let want: Vec<Poly> = (0..=d as u32).map(|j| Poly::monomial(vec![j], q(1))).collect();
            let mut got = b.polys();
            got.sort_by(|x, y| x.lex_min().cmp(&y.lex_min()));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn zero_class() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let b = section_basis_glue(&bs, &DivisorClass::effective(vec![0, 0])).unwrap();
        assert_eq!(b.polys(), vec![Poly::one(2)]);
    }
}

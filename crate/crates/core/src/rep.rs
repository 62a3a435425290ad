//! Fundamental representations with explicit Chevalley generators.
//!
//! A [`Rep`] is given on a weight basis. `f[j][b]` lists the nonzero
//! coordinates of `f_j` applied to basis vector `b`; `e` likewise. Type A
//! uses exterior powers of the defining representation; any other Cartan
//! matrix is handled by a generic construction of the irreducible
//! highest-weight module, or by loading a representation file.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, parse_q, Field, Q};
use crate::linalg::{rref, solve, Mat};
use crate::rootsys::{CartanDatum, Weight};
use crate::{Error, Result};

/// Sparse column: list of `(row, coefficient)`.
pub type SparseCol = Vec<(usize, Q)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    pub weights: Vec<Weight>,
    pub highest: usize,
    /// `f[j][b]`, `j` 0-based simple index.
    pub f: Vec<Vec<SparseCol>>,
    pub e: Vec<Vec<SparseCol>>,
}

/// The fundamental representations `V_{omega_i}` for every simple index.
#[derive(Clone, Debug)]
pub struct GroupModel {
    pub cartan: CartanDatum,
    pub reps: Vec<Rep>,
}

impl GroupModel {
    /// Built-in model: exterior powers for type A, generic construction otherwise.
    pub fn new(cartan: &CartanDatum) -> Result<Self> {
        let reps = (1..=cartan.rank)
            .map(|i| {
                if cartan.is_type_a() {
                    Ok(Rep::exterior_power(cartan.rank, i))
                } else {
                    Rep::highest_weight(cartan, &cartan.fundamental_weight(i))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let g = GroupModel { cartan: cartan.clone(), reps };
        g.validate()?;
        Ok(g)
    }

    pub fn from_reps(cartan: &CartanDatum, reps: Vec<Rep>) -> Result<Self> {
        let g = GroupModel { cartan: cartan.clone(), reps };
        g.validate()?;
        Ok(g)
    }

    pub fn rep(&self, i: usize) -> &Rep {
        &self.reps[i - 1]
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps.len() != self.cartan.rank {
            return Err(Error::LengthMismatch { expected: self.cartan.rank, got: self.reps.len() });
        }
        for (i, r) in self.reps.iter().enumerate() {
            if r.weights[r.highest] != self.cartan.fundamental_weight(i + 1) {
                return Err(Error::VerificationFailure(format!(
                    "representation {} has highest weight {:?}",
                    i + 1,
                    r.weights[r.highest]
                )));
            }
            r.validate(&self.cartan)?;
        }
        Ok(())
    }
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `Lambda^k C^{r+1}` for `sl_{r+1}`, basis = increasing subsets.
    pub fn exterior_power(r: usize, k: usize) -> Rep {
        let n = r + 1;
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for x in start..=n {
                cur.push(x);
                rec(x + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(1, n, k, &mut cur, &mut subsets);
        let index: BTreeMap<Vec<usize>, usize> =
            subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let weights: Vec<Weight> = subsets
            .iter()
            .map(|s| {
                (1..=r)
                    .map(|j| s.contains(&j) as i64 - s.contains(&(j + 1)) as i64)
                    .collect()
            })
            .collect();
        // f_i: e_i -> e_{i+1}; e_i: e_{i+1} -> e_i. Adjacent indices keep the
        // sorted order, so no sign appears.
        let mut f = vec![vec![Vec::new(); subsets.len()]; r];
        let mut e = vec![vec![Vec::new(); subsets.len()]; r];
        for (b, s) in subsets.iter().enumerate() {
            for i in 1..=r {
                if s.contains(&i) && !s.contains(&(i + 1)) {
                    let t: Vec<usize> = s.iter().map(|&x| if x == i { i + 1 } else { x }).collect();
                    f[i - 1][b].push((index[&t], Q::one()));
                }
                if s.contains(&(i + 1)) && !s.contains(&i) {
                    let t: Vec<usize> = s.iter().map(|&x| if x == i + 1 { i } else { x }).collect();
                    e[i - 1][b].push((index[&t], Q::one()));
                }
            }
        }
        let highest = index[&(1..=k).collect::<Vec<_>>()];
        Rep { weights, highest, f, e }
    }

    /// Irreducible module of dominant highest weight `lambda`, built weight
    /// space by weight space.
    ///
    /// Candidates at weight `mu` are `f_j u` for basis vectors `u` of
    /// `V_{mu + alpha_j}`. Below the top, a vector is zero iff every `e_i`
    /// kills it, so a candidate is represented faithfully by the tuple
    /// `(e_i c)_i`, computed from `e_i f_j u = f_j e_i u + delta_ij <wt(u), alpha_i^vee> u`.
    pub fn highest_weight(c: &CartanDatum, lambda: &[i64]) -> Result<Rep> {
        if lambda.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(lambda.to_vec()));
        }
        let r = c.rank;
        let roots: Vec<Weight> = (1..=r).map(|j| c.simple_root(j)).collect();
        let mut weights: Vec<Weight> = vec![lambda.to_vec()];
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::from([(lambda.to_vec(), vec![0])]);
        let mut f: Vec<Vec<SparseCol>> = vec![vec![Vec::new()]; r];
        let mut e: Vec<Vec<SparseCol>> = vec![vec![Vec::new()]; r];
        let mut layer: Vec<Weight> = vec![lambda.to_vec()];
        let mut depth = 0;
        while !layer.is_empty() {
            depth += 1;
            if depth > 10_000 {
                return Err(Error::Internal("highest-weight module does not terminate".into()));
            }
            let mut next: Vec<Weight> = Vec::new();
            for nu in &layer {
                for a in &roots {
                    let mu: Weight = nu.iter().zip(a).map(|(x, y)| x - y).collect();
                    if !next.contains(&mu) && !by_weight.contains_key(&mu) {
                        next.push(mu);
                    }
                }
            }
            next.sort();
            let mut new_layer = Vec::new();
            for mu in next {
                // candidates (j, u)
                let mut cands: Vec<(usize, usize)> = Vec::new();
                for j in 0..r {
                    let up: Weight = mu.iter().zip(&roots[j]).map(|(x, y)| x + y).collect();
                    if let Some(us) = by_weight.get(&up) {
                        for &u in us {
                            cands.push((j, u));
                        }
                    }
                }
                // image of each candidate under (e_1, ..., e_r), as a dense vector
                // indexed by (i, basis vector of V_{mu + alpha_i}).
                let mut targets: Vec<(usize, usize)> = Vec::new();
                for i in 0..r {
                    let up: Weight = mu.iter().zip(&roots[i]).map(|(x, y)| x + y).collect();
                    if let Some(bs) = by_weight.get(&up) {
                        for &b in bs {
                            targets.push((i, b));
                        }
                    }
                }
                let tindex: BTreeMap<(usize, usize), usize> =
                    targets.iter().enumerate().map(|(k, t)| (*t, k)).collect();
                let images: Vec<Vec<Q>> = cands
                    .iter()
                    .map(|&(j, u)| {
                        let mut img = vec![Q::zero(); targets.len()];
                        for i in 0..r {
                            // f_j (e_i u)
                            for (w, cw) in &e[i][u] {
                                for (x, cx) in &f[j][*w] {
                                    if let Some(&k) = tindex.get(&(i, *x)) {
                                        img[k] += cw * cx;
                                    }
                                }
                            }
                            if i == j {
                                let h = weights[u][i];
                                if h != 0 {
                                    if let Some(&k) = tindex.get(&(i, u)) {
                                        img[k] += Q::from_integer(h.into());
                                    }
                                }
                            }
                        }
                        img
                    })
                    .collect();
                // choose independent candidates greedily
                let mut chosen: Vec<usize> = Vec::new();
                let mut rows: Vec<Vec<Q>> = Vec::new();
                for (ci, img) in images.iter().enumerate() {
                    let mut trial = rows.clone();
                    trial.push(img.clone());
                    let mut t2 = trial.clone();
                    if rref(&mut t2).len() > rows.len() {
                        rows = trial;
                        chosen.push(ci);
                    }
                }
                if chosen.is_empty() {
                    continue;
                }
                let base = weights.len();
                let ids: Vec<usize> = (0..chosen.len()).map(|k| base + k).collect();
                for _ in &chosen {
                    weights.push(mu.clone());
                    for j in 0..r {
                        f[j].push(Vec::new());
                        e[j].push(Vec::new());
                    }
                }
                // e_i on the new basis vectors
                for (k, &ci) in chosen.iter().enumerate() {
                    for (t, val) in images[ci].iter().enumerate() {
                        if !val.is_zero() {
                            let (i, b) = targets[t];
                            e[i][ids[k]].push((b, val.clone()));
                        }
                    }
                }
                // f_j u for every candidate, in the new basis
                let basis_cols: Vec<Vec<Q>> = (0..targets.len())
                    .map(|t| chosen.iter().map(|&ci| images[ci][t].clone()).collect())
                    .collect();
                for (ci, &(j, u)) in cands.iter().enumerate() {
                    let x = solve(&basis_cols, &images[ci], chosen.len())
                        .ok_or_else(|| Error::Internal("candidate outside chosen span".into()))?;
                    for (k, xk) in x.into_iter().enumerate() {
                        if !xk.is_zero() {
                            f[j][u].push((ids[k], xk));
                        }
                    }
                }
                by_weight.insert(mu.clone(), ids);
                new_layer.push(mu);
            }
            layer = new_layer;
        }
        let rep = Rep { weights, highest: 0, f, e };
        rep.validate(c)?;
        Ok(rep)
    }

    /// Checks weight compatibility and `[e_i, f_j] = delta_ij h_i` exactly.
    pub fn validate(&self, c: &CartanDatum) -> Result<()> {
        let r = c.rank;
        let n = self.dim();
        if self.f.len() != r || self.e.len() != r {
            return Err(Error::LengthMismatch { expected: r, got: self.f.len() });
        }
        for j in 0..r {
            let a = c.simple_root(j + 1);
            for b in 0..n {
                for (x, _) in &self.f[j][b] {
                    let want: Weight = self.weights[b].iter().zip(&a).map(|(p, q)| p - q).collect();
                    if self.weights[*x] != want {
                        return Err(Error::VerificationFailure(format!("f_{} does not lower weight by alpha", j + 1)));
                    }
                }
            }
        }
        let fm: Vec<Mat<Q>> = (0..r).map(|j| self.f_matrix(j + 1)).collect();
        let em: Vec<Mat<Q>> = (0..r).map(|j| self.e_matrix(j + 1)).collect();
        for i in 0..r {
            for j in 0..r {
                let comm = em[i].mul(&fm[j]).add(&fm[j].mul(&em[i]).scale(&-Q::one()));
                let mut want = Mat::<Q>::zeros(n, n);
                if i == j {
                    for b in 0..n {
                        want.set(b, b, Q::from_integer(self.weights[b][i].into()));
                    }
                }
                if comm != want {
                    return Err(Error::VerificationFailure(format!(
                        "[e_{}, f_{}] relation fails",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn dense(&self, cols: &[SparseCol]) -> Mat<Q> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for (b, col) in cols.iter().enumerate() {
            for (x, c) in col {
                m.set(*x, b, c.clone());
            }
        }
        m
    }

    pub fn f_matrix(&self, j: usize) -> Mat<Q> {
        self.dense(&self.f[j - 1])
    }

    pub fn e_matrix(&self, j: usize) -> Mat<Q> {
        self.dense(&self.e[j - 1])
    }

    /// Matrix of `exp(x f_j)` over any field containing `Q`.
    pub fn exp_f<F: Field>(&self, j: usize, x: &F) -> Mat<F> {
        Mat::exp_nilpotent(&lift(&self.f_matrix(j)), x)
    }

    pub fn exp_e<F: Field>(&self, j: usize, x: &F) -> Mat<F> {
        Mat::exp_nilpotent(&lift(&self.e_matrix(j)), x)
    }

    /// Torus element with `omega_i(h) = z_i`, acting by `prod z_i^{mu_i}` on weight `mu`.
    pub fn torus<F: Field>(&self, z: &[F]) -> Mat<F> {
        let n = self.dim();
        let mut m = Mat::zeros(n, n);
        for b in 0..n {
            let mut v = F::fone();
            for (zi, &k) in z.iter().zip(&self.weights[b]) {
                let p = pow_field(zi, k.unsigned_abs());
                v = if k >= 0 { v.fmul(&p) } else { v.fdiv(&p) };
            }
            m.set(b, b, v);
        }
        m
    }

    /// `dot s_j = exp(e_j) exp(-f_j) exp(e_j)`.
    pub fn s_dot<F: Field>(&self, j: usize) -> Mat<F> {
        let one = F::fone();
        let e = self.exp_e(j, &one);
        e.mul(&self.exp_f(j, &one.fneg())).mul(&e)
    }

    /// Index of the basis vector spanning `f_j v_high`, with its coefficient.
    pub fn f_highest(&self, j: usize) -> Option<(usize, Q)> {
        self.f[j - 1][self.highest].first().cloned()
    }

    pub fn to_file(&self) -> RepFile {
        let enc = |ops: &[Vec<SparseCol>]| -> Vec<Vec<(usize, usize, String)>> {
            ops.iter()
                .map(|cols| {
                    let mut out = Vec::new();
                    for (b, col) in cols.iter().enumerate() {
                        for (x, c) in col {
                            out.push((*x, b, fmt_q(c)));
                        }
                    }
                    out
                })
                .collect()
        };
        RepFile {
            weights: self.weights.clone(),
            highest: self.highest,
            f: enc(&self.f),
            e: Some(enc(&self.e)),
        }
    }

    /// Loads a representation file. Missing `e` operators are reconstructed
    /// by the same weight-space recursion; either way the commutation
    /// relations are verified.
    pub fn from_file(c: &CartanDatum, file: &RepFile) -> Result<Rep> {
        let n = file.weights.len();
        if file.highest >= n {
            return Err(Error::IndexOutOfRange { index: file.highest, max: n });
        }
        let dec = |ops: &[Vec<(usize, usize, String)>]| -> Result<Vec<Vec<SparseCol>>> {
            if ops.len() != c.rank {
                return Err(Error::LengthMismatch { expected: c.rank, got: ops.len() });
            }
            ops.iter()
                .map(|entries| {
                    let mut cols = vec![Vec::new(); n];
                    for (row, col, val) in entries {
                        if *row >= n || *col >= n {
                            return Err(Error::IndexOutOfRange { index: (*row).max(*col), max: n });
                        }
                        let v = parse_q(val).ok_or_else(|| Error::Parse(format!("bad coefficient {val:?}")))?;
                        cols[*col].push((*row, v));
                    }
                    Ok(cols)
                })
                .collect()
        };
        let f = dec(&file.f)?;
        let e = match &file.e {
            Some(e) => dec(e)?,
            None => reconstruct_e(c, &file.weights, file.highest, &f)?,
        };
        let rep = Rep { weights: file.weights.clone(), highest: file.highest, f, e };
        rep.validate(c)?;
        Ok(rep)
    }
}

/// Serialized representation: sparse triples `(row, col, "p/q")` per operator.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RepFile {
    pub weights: Vec<Weight>,
    pub highest: usize,
    pub f: Vec<Vec<(usize, usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<(usize, usize, String)>>>,
}

/// Solves for `e_i` given the `f_j`, processing vectors from the top weight
/// down: for `v = f_j u`, `e_i v = f_j e_i u + delta_ij <wt u, alpha_i^vee> u`.
fn reconstruct_e(c: &CartanDatum, weights: &[Weight], highest: usize, f: &[Vec<SparseCol>]) -> Result<Vec<Vec<SparseCol>>> {
    let n = weights.len();
    let r = c.rank;
    let fm: Vec<Mat<Q>> = f
        .iter()
        .map(|cols| {
            let mut m = Mat::zeros(n, n);
            for (b, col) in cols.iter().enumerate() {
                for (x, v) in col {
                    m.set(*x, b, v.clone());
                }
            }
            m
        })
        .collect();
    // e_i as dense matrices, filled column by column in order of depth.
    let mut em: Vec<Mat<Q>> = vec![Mat::zeros(n, n); r];
    // Each basis vector is written as a combination of f_j u with u higher up.
    let depth = |w: &Weight| -> i64 {
        let diff: Vec<i64> = weights[highest].iter().zip(w).map(|(a, b)| a - b).collect();
        root_height(c, &diff)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&b| depth(&weights[b]));
    let mut done: Vec<usize> = vec![highest];
    for &v in &order {
        if v == highest {
            continue;
        }
        // vectors f_j u with u done, restricted to weight of v
        let mut gens: Vec<(usize, usize, Vec<Q>)> = Vec::new();
        for j in 0..r {
            for &u in &done {
                let col: Vec<Q> = (0..n).map(|x| fm[j].get(x, u).clone()).collect();
                if col.iter().any(|x| !x.is_zero()) {
                    gens.push((j, u, col));
                }
            }
        }
        // find combination sum a_k gens_k = unit vector at v
        let cols: Vec<Vec<Q>> = (0..n)
            .map(|x| gens.iter().map(|g| g.2[x].clone()).collect())
            .collect();
        let mut target = vec![Q::zero(); n];
        target[v] = Q::one();
        let a = solve(&cols, &target, gens.len())
            .ok_or_else(|| Error::VerificationFailure("representation is not generated by its highest vector".into()))?;
        for i in 0..r {
            let mut col = vec![Q::zero(); n];
            for (k, (j, u, _)) in gens.iter().enumerate() {
                if a[k].is_zero() {
                    continue;
                }
                // e_i f_j u = f_j (e_i u) + delta_ij h_i u
                let eu: Vec<Q> = (0..n).map(|x| em[i].get(x, *u).clone()).collect();
                let feu = fm[*j].mul_vec(&eu);
                for x in 0..n {
                    col[x] += &a[k] * &feu[x];
                }
                if i == *j {
                    col[*u] += &a[k] * Q::from_integer(weights[*u][i].into());
                }
            }
            for (x, val) in col.into_iter().enumerate() {
                em[i].set(x, v, val);
            }
        }
        done.push(v);
    }
    Ok(em
        .into_iter()
        .map(|m| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .filter(|&x| !m.get(x, b).is_zero())
                        .map(|x| (x, m.get(x, b).clone()))
                        .collect()
                })
                .collect()
        })
        .collect())
}

/// Height of a root-lattice element given in weight coordinates.
fn root_height(c: &CartanDatum, w: &[i64]) -> i64 {
    let a = crate::linalg::to_q_matrix(&c.matrix);
    let rhs: Vec<Q> = w.iter().map(|&x| Q::from_integer(x.into())).collect();
    let sol = solve(&a, &rhs, c.rank).expect("Cartan matrix is invertible");
    let s: Q = sol.into_iter().sum();
    s.to_integer().try_into().unwrap_or(i64::MAX)
}

pub fn lift<F: Field>(m: &Mat<Q>) -> Mat<F> {
    Mat {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(F::from_q).collect(),
    }
}

pub fn pow_field<F: Field>(x: &F, k: u64) -> F {
    let mut acc = F::fone();
    for _ in 0..k {
        acc = acc.fmul(x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn character(r: &Rep) -> BTreeMap<Weight, usize> {
        let mut m = BTreeMap::new();
        for w in &r.weights {
            *m.entry(w.clone()).or_insert(0) += 1;
        }
        m
    }

    fn weyl_character(c: &CartanDatum, lam: &[i64]) -> BTreeMap<Weight, usize> {
        let w0 = c.longest_reduced_words().remove(0);
        c.demazure_character(&w0, lam)
            .unwrap()
            .iter()
            .map(|(w, &m)| (w.clone(), m as usize))
            .collect()
    }

    #[test]
    fn exterior_powers_are_valid() {
        let c = CartanDatum::type_a(3);
        for k in 1..=3 {
            let r = Rep::exterior_power(3, k);
            r.validate(&c).unwrap();
            assert_eq!(character(&r), weyl_character(&c, &c.fundamental_weight(k)));
        }
    }

    #[test]
    fn generic_construction_matches_characters() {
        for c in [CartanDatum::type_a(2), CartanDatum::type_b(2), CartanDatum::type_c(3), CartanDatum::type_g2()] {
            for i in 1..=c.rank {
                let lam = c.fundamental_weight(i);
                let r = Rep::highest_weight(&c, &lam).unwrap();
                assert_eq!(r.dim() as u64, c.weyl_dimension(&lam).unwrap());
                assert_eq!(character(&r), weyl_character(&c, &lam));
            }
        }
        let c = CartanDatum::type_a(2);
        let adj = Rep::highest_weight(&c, &[1, 1]).unwrap();
        assert_eq!(adj.dim(), 8);
    }

    #[test]
    fn file_round_trip_and_reconstruction() {
        let c = CartanDatum::type_b(2);
        let r = Rep::highest_weight(&c, &[1, 0]).unwrap();
        let file = r.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let back: RepFile = serde_json::from_str(&json).unwrap();
        assert_eq!(Rep::from_file(&c, &back).unwrap(), r);
        let mut no_e = back.clone();
        no_e.e = None;
        let rebuilt = Rep::from_file(&c, &no_e).unwrap();
        assert_eq!(rebuilt.f, r.f);
        assert_eq!(rebuilt.e_matrix(1), r.e_matrix(1));
        assert_eq!(rebuilt.e_matrix(2), r.e_matrix(2));
    }

    #[test]
    fn s_dot_maps_highest_to_extremal() {
        let c = CartanDatum::type_b(2);
        let g = GroupModel::new(&c).unwrap();
        for i in 1..=2 {
            let r = g.rep(i);
            let s: Mat<Q> = r.s_dot(i);
            let mut v = vec![Q::zero(); r.dim()];
            v[r.highest] = Q::one();
            let w = s.mul_vec(&v);
            let nz: Vec<usize> = (0..r.dim()).filter(|&b| !w[b].is_zero()).collect();
            assert_eq!(nz.len(), 1);
            let want = c.simple_reflection(i, &r.weights[r.highest]).unwrap();
            assert_eq!(r.weights[nz[0]], want);
        }
    }
}

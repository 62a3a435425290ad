//! Group elements, the big-cell decomposition, and test curves through the
//! boundary divisors at infinity.
//!
//! Any `p = (p_1, ..., p_n)` with `p_j in P_{i_j}` and generic entries can be
//! written as `(exp(t_1 f_{i_1}), ..., exp(t_n f_{i_n})) . b` with `b in B^n`.
//! The decomposition is recursive: `g_j = beta_{j-1} p_j = exp(t_j f) beta_j`.
//! Since `f_i^2 v_{omega_i} = 0`, `g_j v_{omega_{i_j}} = a (v + t_j f v)` with
//! `a = omega_{i_j}(beta_j)`, which yields `t_j` and `a` directly.
//!
//! The complement of the big cell is the union of divisors `E_k` ("t_k at
//! infinity"). A generic point of `E_k` is reached by the curve with
//! `p_k = exp(u e_{i_k}) dot s_{i_k}` and random `p_j = exp(c_j f_{i_j})` for
//! `j > k`, while `t_j` for `j < k` stay free.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Field, RatFunc, Q};
use crate::bs::BottSamelson;
use crate::linalg::Mat;
use crate::rep::GroupModel;
use crate::{Error, Result};

/// A generator of the group, to be evaluated in every fundamental representation.
#[derive(Clone, Debug, PartialEq)]
pub enum Gen<F> {
    /// `exp(x f_i)`
    F(usize, F),
    /// `exp(x e_i)`
    E(usize, F),
    /// torus element with `omega_i(h) = z_i`
    H(Vec<F>),
    /// `dot s_i`
    S(usize),
}

/// A product of generators, left to right.
pub type GroupElement<F> = Vec<Gen<F>>;

/// Matrices of a group element in all fundamental representations.
pub fn matrices<F: Field>(g: &GroupModel, x: &[Gen<F>]) -> Vec<Mat<F>> {
    g.reps
        .iter()
        .map(|rep| {
            let mut m = Mat::identity(rep.dim());
            for gen in x {
                let gm = match gen {
                    Gen::F(i, c) => rep.exp_f(*i, c),
                    Gen::E(i, c) => rep.exp_e(*i, c),
                    Gen::H(z) => rep.torus(z),
                    Gen::S(i) => rep.s_dot(*i),
                };
                m = m.mul(&gm);
            }
            m
        })
        .collect()
}

/// Inverse of a product of generators.
pub fn inverse<F: Field>(x: &[Gen<F>]) -> Vec<Gen<F>> {
    x.iter()
        .rev()
        .map(|g| match g {
            Gen::F(i, c) => Gen::F(*i, c.fneg()),
            Gen::E(i, c) => Gen::E(*i, c.fneg()),
            Gen::H(z) => Gen::H(z.iter().map(|v| F::fone().fdiv(v)).collect()),
            // dot s_i^{-1} = dot s_i^3 = exp(-e) exp(f) exp(-e)
            Gen::S(i) => Gen::S(*i),
        })
        .flat_map(|g| match g {
            Gen::S(i) => vec![Gen::E(i, F::fone().fneg()), Gen::F(i, F::fone()), Gen::E(i, F::fone().fneg())],
            other => vec![other],
        })
        .collect()
}

/// Output of the big-cell decomposition, for factors `start..=n`.
#[derive(Clone, Debug)]
pub struct Decomposition<F> {
    /// `t_j` for `j = start, ..., n`.
    pub t: Vec<F>,
    /// `omega_{i_j}(beta_j)` for `j = start, ..., n`.
    pub a: Vec<F>,
    /// `beta_n` in every fundamental representation.
    pub last: Vec<Mat<F>>,
}

/// Decomposes `(p_start, ..., p_n)` (with `beta_{start-1} = 1`) into cell
/// coordinates and torus characters. `p[j]` holds the matrices of
/// `p_{start+j}` in all fundamental representations.
pub fn decompose<F: Field>(bs: &BottSamelson, start: usize, p: &[Vec<Mat<F>>]) -> Result<Decomposition<F>> {
    let reps = &bs.group.reps;
    let mut beta: Vec<Mat<F>> = reps.iter().map(|r| Mat::identity(r.dim())).collect();
    let mut t = Vec::new();
    let mut a = Vec::new();
    for (off, pj) in p.iter().enumerate() {
        let j = start + off;
        let i = bs.word[j - 1];
        let g: Vec<Mat<F>> = beta.iter().zip(pj).map(|(b, x)| b.mul(x)).collect();
        let rep = &reps[i - 1];
        let gi = &g[i - 1];
        let aj = gi.get(rep.highest, rep.highest).clone();
        if aj.is_fzero() {
            return Err(Error::Internal(format!("factor {j} is not in the big cell")));
        }
        let (b, c) = rep
            .f_highest(i)
            .ok_or_else(|| Error::Internal("f_i kills the highest vector".into()))?;
        let tj = gi.get(b, rep.highest).fdiv(&aj.fmul(&F::from_q(&c)));
        beta = g
            .iter()
            .zip(reps)
            .map(|(gl, r)| r.exp_f(i, &tj.fneg()).mul(gl))
            .collect();
        t.push(tj);
        a.push(aj);
    }
    Ok(Decomposition { t, a, last: beta })
}

/// A test curve through a generic point of `E_k`, parametrized by `u`.
#[derive(Clone, Debug)]
pub struct Curve {
    pub k: usize,
    /// `t_j(u)` for `j = k, ..., n`.
    pub t: Vec<RatFunc>,
    /// `omega_{i_j}(beta_j)(u)` for `j = k, ..., n`.
    pub a: Vec<RatFunc>,
}

/// Lazily generated test curves, cached per `(chart, index)`.
#[derive(Debug, Default)]
pub struct ChartData {
    curves: Mutex<HashMap<(usize, usize), Arc<Curve>>>,
}

impl ChartData {
    pub fn curve(&self, bs: &BottSamelson, k: usize, r: usize) -> Result<Arc<Curve>> {
        if let Some(c) = self.curves.lock().unwrap().get(&(k, r)) {
            return Ok(c.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(bs.seed ^ ((k as u64) << 32) ^ (r as u64).wrapping_mul(0x9e37_79b9));
        let mut last_err = None;
        for _ in 0..20 {
            let cs: Vec<i64> = (k + 1..=bs.n())
                .map(|_| {
                    let v: i64 = rng.gen_range(1..=7);
                    if rng.gen_bool(0.5) { v } else { -v }
                })
                .collect();
            match build_curve(bs, k, &cs) {
                Ok(c) => {
                    let c = Arc::new(c);
                    self.curves.lock().unwrap().insert((k, r), c.clone());
                    return Ok(c);
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap())
    }
}

fn build_curve(bs: &BottSamelson, k: usize, cs: &[i64]) -> Result<Curve> {
    let u = RatFunc::var();
    let mut elems: Vec<Vec<Mat<RatFunc>>> = Vec::new();
    let ik = bs.word[k - 1];
    elems.push(matrices(&bs.group, &[Gen::E(ik, u), Gen::S(ik)]));
    for (off, &c) in cs.iter().enumerate() {
        let i = bs.word[k + off];
        elems.push(matrices(&bs.group, &[Gen::F(i, RatFunc::constant(Q::from_integer(c.into())))]));
    }
    let d = decompose(bs, k, &elems)?;
    Ok(Curve { k, t: d.t, a: d.a })
}

impl BottSamelson {
    pub fn chart_data(&self) -> Result<Arc<ChartData>> {
        self.charts
            .get_or_init(|| Ok(Arc::new(ChartData::default())))
            .clone()
    }

    pub fn curve(&self, k: usize, r: usize) -> Result<Arc<Curve>> {
        self.chart_data()?.curve(self, k, r)
    }

    /// Orders along `E_k` of `omega_{i_j}(beta_j)` and of `t_j`, as the
    /// minimum over a few test curves (the generic value).
    pub fn chart_orders(&self) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        let n = self.n();
        let mut a = vec![vec![0i64; n]; n];
        let mut t = vec![vec![0i64; n]; n];
        for k in 1..=n {
            let curves = if k == n { 1 } else { 3 };
            for j in k..=n {
                a[k - 1][j - 1] = i64::MAX;
                t[k - 1][j - 1] = i64::MAX;
            }
            for r in 0..curves {
                let c = self.curve(k, r)?;
                for j in k..=n {
                    let oa = c.a[j - k].order_at_zero().ok_or_else(|| Error::Internal("vanishing character".into()))?;
                    let ot = c.t[j - k].order_at_zero().unwrap_or(i64::MAX);
                    a[k - 1][j - 1] = a[k - 1][j - 1].min(oa);
                    t[k - 1][j - 1] = t[k - 1][j - 1].min(ot);
                }
            }
            for j in k..=n {
                if t[k - 1][j - 1] == i64::MAX {
                    // t_j vanishes identically on every test curve: it never
                    // produces a pole, and order 0 is the safe generic value.
                    t[k - 1][j - 1] = 0;
                }
            }
        }
        Ok((a, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn sl2_chart_curve() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let c = bs.curve(1, 0).unwrap();
        // exp(u e) dot s = exp(u^{-1} f) beta with omega(beta) = -u.
        assert_eq!(c.t[0], RatFunc::var().inv());
        assert_eq!(c.a[0], RatFunc::constant(q(-1)) * RatFunc::var());
    }

    #[test]
    fn decomposition_recovers_cell_point() {
        let bs = BottSamelson::from_type("A2", &[1, 2, 1]).unwrap();
        let ts = [q(2), q(-3), Q::new(1.into(), 2.into())];
        let h = vec![q(3), q(5)];
        // p_j = exp(t_j f) b_j with b_j = h exp(e_1) exp(e_2)
        let b: Vec<Gen<Q>> = vec![Gen::H(h.clone()), Gen::E(1, q(1)), Gen::E(2, q(2))];
        let mut elems = Vec::new();
        for (j, t) in ts.iter().enumerate() {
            let mut x = Vec::new();
            if j > 0 {
                x.extend(inverse(&b));
            }
            x.push(Gen::F(bs.word[j], t.clone()));
            x.extend(b.clone());
            elems.push(matrices(&bs.group, &x));
        }
        let d = decompose(&bs, 1, &elems).unwrap();
        assert_eq!(d.t, ts.to_vec());
        // omega_1(h) = 3, omega_2(h) = 5
        assert_eq!(d.a, vec![q(3), q(5), q(3)]);
    }
}

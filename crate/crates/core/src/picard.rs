//! The Picard lattice of `Z_w` with its effective basis (boundary divisors
//! `Z_{w(j)}`) and canonical basis (`O_k(1)`), and numerical invariants of
//! nef classes.
//!
//! The change of basis is derived from the chart computation: the section
//! `t_j` of `O(Z_{w(j)})` has neither zeros nor poles along the divisors at
//! infinity `E_k`, so with `A[k][l] = ord_{E_k} omega_{i_l}(beta_l)` and
//! `T[k][l] = ord_{E_k} t_l` the canonical coordinates `c` of `Z_{w(j)}`
//! solve `A c + T e_j = 0`, i.e. `M = -A^{-1} T`. The result is then checked
//! against section dimensions computed without it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::Q;
use crate::bs::BottSamelson;
use crate::linalg::{inverse, rank, to_q_matrix};
use crate::rootsys::Character;
use crate::sections::glue::section_basis_glue;
use crate::sections::nef::nef_space;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Effective,
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
    pub basis: Basis,
}

impl DivisorClass {
    pub fn effective(coords: Vec<i64>) -> Self {
        DivisorClass { coords, basis: Basis::Effective }
    }

    pub fn canonical(coords: Vec<i64>) -> Self {
        DivisorClass { coords, basis: Basis::Canonical }
    }

    pub fn to_canonical(&self, bs: &BottSamelson) -> Result<DivisorClass> {
        bs.check_len(&self.coords)?;
        match self.basis {
            Basis::Canonical => Ok(self.clone()),
            Basis::Effective => {
                let m = bs.raw_basis_change()?;
                Ok(DivisorClass::canonical(m.apply(&self.coords)))
            }
        }
    }

    pub fn to_effective(&self, bs: &BottSamelson) -> Result<DivisorClass> {
        bs.check_len(&self.coords)?;
        match self.basis {
            Basis::Effective => Ok(self.clone()),
            Basis::Canonical => {
                let m = bs.raw_basis_change()?;
                Ok(DivisorClass::effective(m.apply_inverse(&self.coords)?))
            }
        }
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass { coords: self.coords.iter().map(|x| x * k).collect(), basis: self.basis }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.basis {
            Basis::Effective => "eff",
            Basis::Canonical => "can",
        };
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:{}", tag, c.join(","))
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Parses `"eff:1,0,2"` or `"can:1,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (tag, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("divisor class {s:?} lacks an eff:/can: prefix")))?;
        let basis = match tag.trim() {
            "eff" => Basis::Effective,
            "can" => Basis::Canonical,
            other => return Err(Error::Parse(format!("unknown basis tag {other:?}"))),
        };
        let coords = rest
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate {x:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass { coords, basis })
    }
}

/// `M` maps effective coordinates to canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisChange {
    pub matrix: Vec<Vec<i64>>,
    #[serde(skip)]
    pub inverse: Vec<Vec<Q>>,
}

impl BasisChange {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let inverse = inverse(&to_q_matrix(&matrix))
            .ok_or_else(|| Error::VerificationFailure("basis change is singular".into()))?;
        Ok(BasisChange { matrix, inverse })
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_inverse(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.inverse
            .iter()
            .map(|row| {
                let x: Q = row.iter().zip(v).map(|(a, &b)| a * Q::from_integer(b.into())).sum();
                if !x.is_integer() {
                    return Err(Error::Internal("non-integral effective coordinates".into()));
                }
                i64::try_from(x.to_integer()).map_err(|_| Error::Internal("overflow".into()))
            })
            .collect()
    }

    /// Canonical coordinates of the `j`-th boundary divisor (1-based).
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[j - 1]).collect()
    }
}

impl BottSamelson {
    /// The change of basis from chart orders, without the dimension cross-checks.
    pub fn raw_basis_change(&self) -> Result<BasisChange> {
        self.basis_change
            .get_or_init(|| {
                let (a, t) = self.chart_orders()?;
                let n = self.n();
                let ainv = inverse(&to_q_matrix(&a))
                    .ok_or_else(|| Error::Internal("chart order matrix is singular".into()))?;
                let tq = to_q_matrix(&t);
                let mut m = vec![vec![0i64; n]; n];
                for k in 0..n {
                    for j in 0..n {
                        let x: Q = -(0..n).map(|l| &ainv[k][l] * &tq[l][j]).sum::<Q>();
                        if !x.is_integer() {
                            return Err(Error::VerificationFailure("basis change is not integral".into()));
                        }
                        m[k][j] = i64::try_from(x.to_integer()).map_err(|_| Error::Internal("overflow".into()))?;
                    }
                }
                BasisChange::new(m)
            })
            .clone()
    }
}

/// The basis change together with the checks that it is consistent with
/// independently computed section dimensions:
///
/// * unit diagonal;
/// * for nef `c` and `j` with `c - M e_j` nef, the sections of `O(c)`
///   divisible by `t_j` have dimension `dim H^0(O(c - M e_j))`;
/// * for effective `m` with `M m` nef, the gluing solver's dimension equals
///   the Demazure character dimension of `M m`.
pub fn compute_basis_change(bs: &BottSamelson) -> Result<BasisChange> {
    let bc = bs.raw_basis_change()?;
    let n = bs.n();
    for j in 0..n {
        if bc.matrix[j][j] != 1 {
            return Err(Error::VerificationFailure(format!("diagonal entry {} of the basis change is {}", j + 1, bc.matrix[j][j])));
        }
    }
    let range = if n <= 2 { 3 } else { 1 };
    for c in boxed(n, 0, range.min(2)) {
        let space = nef_space(bs, &c)?;
        for j in 1..=n {
            let rest: Vec<i64> = c.iter().zip(bc.column(j)).map(|(a, b)| a - b).collect();
            if rest.iter().any(|&x| x < 0) {
                continue;
            }
            let want = bs.cartan.bs_character(&bs.word, &rest)?.dim() as usize;
            let got = divisible_dim(&space.sections, &space.weights, j);
            if got != want {
                return Err(Error::VerificationFailure(format!(
                    "t_{j}-divisible sections of can {c:?}: {got}, expected {want}"
                )));
            }
        }
    }
    for m in boxed(n, -range, range) {
        let c = bc.apply(&m);
        if c.iter().any(|&x| x < 0) || m.iter().any(|&x| x < 0) {
            continue;
        }
        let want = bs.cartan.bs_character(&bs.word, &c)?.dim() as usize;
        let got = section_basis_glue(bs, &DivisorClass::effective(m.clone()))?.dim();
        if got != want {
            return Err(Error::VerificationFailure(format!(
                "glued sections of eff {m:?}: {got}, character dimension of can {c:?}: {want}"
            )));
        }
    }
    Ok(bc)
}

fn boxed(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Dimension of the subspace of sections divisible by `t_j`, weight space by weight space.
fn divisible_dim(polys: &[crate::poly::Poly], weights: &[Vec<i64>], j: usize) -> usize {
    let mut total = 0;
    let mut start = 0;
    while start < polys.len() {
        let mut end = start;
        while end < polys.len() && weights[end] == weights[start] {
            end += 1;
        }
        let block = &polys[start..end];
        let mut monos: Vec<Vec<u32>> = block
            .iter()
            .flat_map(|p| p.terms().filter(|(e, _)| e[j - 1] == 0).map(|(e, _)| e.clone()))
            .collect();
        monos.sort();
        monos.dedup();
        let rows: Vec<Vec<Q>> = block.iter().map(|p| monos.iter().map(|e| p.coeff(e)).collect()).collect();
        total += block.len() - if monos.is_empty() { 0 } else { rank(&rows) };
        start = end;
    }
    total
}

pub fn is_effective(bs: &BottSamelson, d: &DivisorClass) -> Result<bool> {
    Ok(d.to_effective(bs)?.coords.iter().all(|&x| x >= 0))
}

pub fn is_nef(bs: &BottSamelson, d: &DivisorClass) -> Result<bool> {
    Ok(d.to_canonical(bs)?.coords.iter().all(|&x| x >= 0))
}

/// `vol(D)` for nef `D`: the `n`-th forward difference of `k -> dim H^0(kD)`,
/// i.e. `n!` times the leading coefficient. The interpolating polynomial is
/// checked at `k = n + 1`.
pub fn volume(bs: &BottSamelson, d: &DivisorClass) -> Result<Q> {
    let can = d.to_canonical(bs)?;
    if can.coords.iter().any(|&x| x < 0) {
        return Err(Error::NotNef(can.coords));
    }
    let n = bs.n();
    let vals: Vec<BigInt> = (0..=n + 1)
        .map(|k| Ok(BigInt::from(bs.cartan.bs_character(&bs.word, &can.scale(k as i64).coords)?.dim())))
        .collect::<Result<_>>()?;
    let mut diffs = vals;
    for _ in 0..n {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // diffs has two entries: the n-th difference at 0 and at 1.
    if diffs[0] != diffs[1] {
        return Err(Error::VerificationFailure("k -> dim H^0(kD) is not a polynomial of degree n".into()));
    }
    Ok(Q::from_integer(diffs[0].clone()))
}

/// The class `D` (canonical coordinates) with `bs_character(D)` equal to the
/// Demazure character of `lambda`, searched among nef classes with top
/// weight `lambda`.
pub fn pullback_from_flag_variety(bs: &BottSamelson, lambda: &[i64]) -> Result<DivisorClass> {
    if lambda.len() != bs.cartan.rank {
        return Err(Error::LengthMismatch { expected: bs.cartan.rank, got: lambda.len() });
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::NotDominant(lambda.to_vec()));
    }
    let target: Character = bs.cartan.demazure_character(&bs.word, lambda)?;
    let n = bs.n();
    let mut matches = Vec::new();
    // distribute lambda_i over the positions carrying index i
    let mut cands: Vec<Vec<i64>> = vec![vec![]];
    for k in 0..n {
        let i = bs.word[k];
        cands = cands
            .into_iter()
            .flat_map(|v| (0..=lambda[i - 1]).map(move |x| {
                let mut w = v.clone();
                w.push(x);
                w
            }))
            .collect();
    }
    for m in cands {
        if bs.top_weight(&m) != lambda {
            continue;
        }
        if bs.cartan.bs_character(&bs.word, &m)? == target {
            matches.push(m);
        }
    }
    match matches.len() {
        0 => Err(Error::NoMatch(format!("lambda = {lambda:?}"))),
        1 => Ok(DivisorClass::canonical(matches.pop().unwrap())),
        _ => Err(Error::Ambiguous(format!("{matches:?}"))),
    }
}

/// Canonical coordinates of a class restricted to `Y_1 = Z_{w(1)}`, viewed on
/// the truncated word `(s_{i_2}, ..., s_{i_n})`: the first coordinate drops out.
pub fn restrict_to_y1(bs: &BottSamelson, d: &DivisorClass) -> Result<DivisorClass> {
    let can = d.to_canonical(bs)?;
    Ok(DivisorClass::canonical(can.coords[1..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn parse_and_display() {
        let d: DivisorClass = "eff:1,0,2".parse().unwrap();
        assert_eq!(d, DivisorClass::effective(vec![1, 0, 2]));
        assert_eq!(d.to_string(), "eff:1,0,2");
        assert!("xyz:1".parse::<DivisorClass>().is_err());
        assert!("can:1,a".parse::<DivisorClass>().is_err());
    }

    #[test]
    fn rank_one() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        assert_eq!(compute_basis_change(&bs).unwrap().matrix, vec![vec![1]]);
        for m in 0..5 {
            assert_eq!(volume(&bs, &DivisorClass::canonical(vec![m])).unwrap(), q(m));
        }
    }

    #[test]
    fn a2_volume_and_pullback() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        assert_eq!(volume(&bs, &DivisorClass::canonical(vec![0, 1])).unwrap(), q(1));
        assert_eq!(volume(&bs, &DivisorClass::canonical(vec![0, 0])).unwrap(), q(0));
        assert!(matches!(volume(&bs, &DivisorClass::canonical(vec![0, -1])), Err(Error::NotNef(_))));
        assert_eq!(pullback_from_flag_variety(&bs, &[0, 1]).unwrap(), DivisorClass::canonical(vec![0, 1]));
        assert_eq!(pullback_from_flag_variety(&bs, &[0, 0]).unwrap(), DivisorClass::canonical(vec![0, 0]));
    }
}

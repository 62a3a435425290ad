//! Cartan data, root systems, Weyl group words and the character ring with
//! Demazure operators.
//!
//! Conventions: weights are stored in fundamental-weight coordinates, and
//! the Cartan matrix entry `a[i][j] = <alpha_i^vee, alpha_j>`, so the simple
//! root `alpha_j` in fundamental-weight coordinates is column `j` of the
//! matrix. Indices in public APIs are 1-based.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Q;
use crate::{Error, Result};

/// A weight in fundamental-weight coordinates.
pub type Weight = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanDatum {
    pub rank: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl CartanDatum {
    /// Validates the Cartan-matrix axioms.
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("rank 0".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCartan(format!("row {} has length {}", i + 1, row.len())));
            }
            if row[i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {} is {}", i + 1, row[i])));
            }
            for (j, &a) in row.iter().enumerate() {
                if i != j && a > 0 {
                    return Err(Error::InvalidCartan(format!("positive off-diagonal entry at ({},{})", i + 1, j + 1)));
                }
                if (a == 0) != (matrix[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("asymmetric zero pattern at ({},{})", i + 1, j + 1)));
                }
            }
        }
        let c = CartanDatum { rank, matrix };
        c.symmetrizer()?;
        Ok(c)
    }

    pub fn type_a(r: usize) -> Self {
        let mut m = vec![vec![0; r]; r];
        for i in 0..r {
            m[i][i] = 2;
            if i + 1 < r {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        CartanDatum { rank: r, matrix: m }
    }

    /// Bourbaki numbering, `alpha_r` short.
    pub fn type_b(r: usize) -> Self {
        let mut c = Self::type_a(r);
        if r >= 2 {
            c.matrix[r - 1][r - 2] = -2;
        }
        c
    }

    /// Bourbaki numbering, `alpha_r` long.
    pub fn type_c(r: usize) -> Self {
        let mut c = Self::type_a(r);
        if r >= 2 {
            c.matrix[r - 2][r - 1] = -2;
        }
        c
    }

    pub fn type_d(r: usize) -> Self {
        let mut c = Self::type_a(r);
        if r >= 3 {
            c.matrix[r - 2][r - 1] = 0;
            c.matrix[r - 1][r - 2] = 0;
            c.matrix[r - 3][r - 1] = -1;
            c.matrix[r - 1][r - 3] = -1;
        }
        c
    }

    /// Bourbaki numbering, `alpha_1` short.
    pub fn type_g2() -> Self {
        CartanDatum {
            rank: 2,
            matrix: vec![vec![2, -3], vec![-1, 2]],
        }
    }

    /// Parses names such as `"A2"`, `"B3"`, `"G2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Parse("empty Cartan type".into()))?
            .to_ascii_uppercase();
        let r: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad Cartan type {s:?}")))?;
        let bad = || Error::Parse(format!("unsupported Cartan type {s:?}"));
        match letter {
            'A' if r >= 1 => Ok(Self::type_a(r)),
            'B' if r >= 2 => Ok(Self::type_b(r)),
            'C' if r >= 2 => Ok(Self::type_c(r)),
            'D' if r >= 3 => Ok(Self::type_d(r)),
            'G' if r == 2 => Ok(Self::type_g2()),
            _ => Err(bad()),
        }
    }

    /// True when the matrix is the type-A Cartan matrix of its rank.
    pub fn is_type_a(&self) -> bool {
        *self == Self::type_a(self.rank)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange { index: i, max: self.rank })
        } else {
            Ok(())
        }
    }

    /// Simple root `alpha_i` in fundamental-weight coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        (0..self.rank).map(|r| self.matrix[r][i - 1]).collect()
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut w = vec![0; self.rank];
        w[i - 1] = 1;
        w
    }

    /// Converts root-lattice coordinates `sum c_j alpha_j` to weight coordinates.
    pub fn root_to_weight(&self, c: &[i64]) -> Weight {
        (0..self.rank)
            .map(|r| (0..self.rank).map(|j| self.matrix[r][j] * c[j]).sum())
            .collect()
    }

    /// Positive integers `d_i` with `d_i a_ij = d_j a_ji`.
    pub fn symmetrizer(&self) -> Result<Vec<Q>> {
        let n = self.rank;
        let mut d: Vec<Option<Q>> = vec![None; n];
        for start in 0..n {
            if d[start].is_some() {
                continue;
            }
            d[start] = Some(Q::one());
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let di = d[i].clone().unwrap();
                for j in 0..n {
                    if i == j || self.matrix[i][j] == 0 {
                        continue;
                    }
                    let dj = &di * Q::from_integer(self.matrix[i][j].into())
                        / Q::from_integer(self.matrix[j][i].into());
                    match &d[j] {
                        None => {
                            d[j] = Some(dj);
                            queue.push_back(j);
                        }
                        Some(x) if *x != dj => {
                            return Err(Error::InvalidCartan("matrix is not symmetrizable".into()))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(d.into_iter().map(|x| x.unwrap()).collect())
    }

    /// Pairing `<beta, alpha_i^vee>` for `beta` in root coordinates.
    fn root_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| self.matrix[i][j] * beta[j]).sum()
    }

    /// Positive roots in simple-root coordinates, sorted by height then lexicographically.
    ///
    /// Panics if the root system is infinite (non-finite-type Cartan matrix).
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut seen: HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut layer = roots.clone();
        let mut height = 1;
        while !layer.is_empty() {
            assert!(height < 200, "root system is not of finite type");
            let mut next = BTreeSet::new();
            for beta in &layer {
                for i in 0..n {
                    // p = largest r with beta - r alpha_i a root
                    let mut p = 0;
                    loop {
                        let mut g = beta.clone();
                        g[i] -= p + 1;
                        if seen.contains(&g) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.root_coroot(beta, i);
                    if q > 0 {
                        let mut g = beta.clone();
                        g[i] += 1;
                        if !seen.contains(&g) {
                            next.insert(g);
                        }
                    }
                }
            }
            layer = next.into_iter().collect();
            for g in &layer {
                seen.insert(g.clone());
                roots.push(g.clone());
            }
            height += 1;
        }
        roots
    }

    /// `s_i` on a root given in simple-root coordinates.
    fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let mut out = beta.to_vec();
        out[i] -= self.root_coroot(beta, i);
        out
    }

    /// `s_i(lambda) = lambda - lambda_i alpha_i`.
    pub fn simple_reflection(&self, i: usize, lambda: &[i64]) -> Result<Weight> {
        self.check_index(i)?;
        if lambda.len() != self.rank {
            return Err(Error::LengthMismatch { expected: self.rank, got: lambda.len() });
        }
        Ok(self.reflect_unchecked(i, lambda))
    }

    pub(crate) fn reflect_unchecked(&self, i: usize, lambda: &[i64]) -> Weight {
        let c = lambda[i - 1];
        (0..self.rank)
            .map(|r| lambda[r] - c * self.matrix[r][i - 1])
            .collect()
    }

    pub fn check_word(&self, word: &[usize]) -> Result<()> {
        word.iter().try_for_each(|&i| self.check_index(i))
    }

    /// Length of the Weyl element `s_{i_1} ... s_{i_n}`: the number of
    /// positive roots it sends to negative roots.
    pub fn length(&self, word: &[usize]) -> Result<usize> {
        self.check_word(word)?;
        let roots = self.positive_roots();
        Ok(roots
            .iter()
            .filter(|beta| {
                let mut b = beta.to_vec();
                for &i in word.iter().rev() {
                    b = self.reflect_root(i - 1, &b);
                }
                b.iter().all(|&c| c <= 0)
            })
            .count())
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.length(word)? == word.len())
    }

    /// All Weyl group elements, each as a reduced word, via the orbit of rho.
    pub fn weyl_group_words(&self) -> Vec<Vec<usize>> {
        let rho = vec![1i64; self.rank];
        let mut seen: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        seen.insert(rho.clone(), vec![]);
        let mut queue = VecDeque::from([rho]);
        while let Some(mu) = queue.pop_front() {
            let word = seen[&mu].clone();
            for i in 1..=self.rank {
                if mu[i - 1] > 0 {
                    let nu = self.reflect_unchecked(i, &mu);
                    if !seen.contains_key(&nu) {
                        // nu = s_i w rho, so the word for nu is i followed by w's word.
                        let mut w = vec![i];
                        w.extend(&word);
                        seen.insert(nu.clone(), w);
                        queue.push_back(nu);
                    }
                }
            }
        }
        seen.into_values().collect()
    }

    /// Every reduced word of the longest element.
    pub fn longest_reduced_words(&self) -> Vec<Vec<usize>> {
        let rho = vec![1i64; self.rank];
        let target: Weight = rho.iter().map(|x| -x).collect();
        let mut out = Vec::new();
        let mut stack = vec![(rho, Vec::<usize>::new())];
        while let Some((mu, path)) = stack.pop() {
            if mu == target {
                // mu = s_{j_N} ... s_{j_1} rho with path = (j_1, ..., j_N).
                out.push(path.iter().rev().copied().collect());
                continue;
            }
            for i in 1..=self.rank {
                if mu[i - 1] > 0 {
                    let mut p = path.clone();
                    p.push(i);
                    stack.push((self.reflect_unchecked(i, &mu), p));
                }
            }
        }
        out.sort();
        out
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &[i64]) -> Result<u64> {
        if lambda.len() != self.rank {
            return Err(Error::LengthMismatch { expected: self.rank, got: lambda.len() });
        }
        if lambda.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant(lambda.to_vec()));
        }
        let d = self.symmetrizer()?;
        let mut num = Q::one();
        let mut den = Q::one();
        for beta in self.positive_roots() {
            let mut a = Q::zero();
            let mut b = Q::zero();
            for j in 0..self.rank {
                let cd = Q::from_integer(beta[j].into()) * &d[j];
                a += &cd * Q::from_integer((lambda[j] + 1).into());
                b += cd;
            }
            num *= a;
            den *= b;
        }
        let r = num / den;
        if !r.is_integer() {
            return Err(Error::Internal("Weyl dimension is not an integer".into()));
        }
        u64::try_from(r.to_integer()).map_err(|_| Error::Internal("dimension overflow".into()))
    }

    /// Demazure operator `Lambda_i f = (f - e^{-alpha_i} s_i f) / (1 - e^{-alpha_i})`.
    ///
    /// The division is carried out string by string: the support is grouped
    /// into `alpha_i`-strings, on each of which `x = e^{-alpha_i}` turns the
    /// numerator into a Laurent polynomial divisible by `1 - x`.
    pub fn demazure(&self, i: usize, f: &Character) -> Result<Character> {
        self.check_index(i)?;
        let alpha = self.simple_root(i);
        let ii = i - 1;
        // numerator g = f - e^{-alpha} s_i f
        let mut g = f.clone();
        for (lam, &c) in f.iter() {
            let mut mu = self.reflect_unchecked(i, lam);
            for (m, a) in mu.iter_mut().zip(&alpha) {
                *m -= a;
            }
            g.add_term(mu, -c);
        }
        // Group by string representative; position p means rep - p*alpha, i.e. x^p.
        let mut strings: BTreeMap<Weight, BTreeMap<i64, i64>> = BTreeMap::new();
        for (lam, &c) in g.iter() {
            let p = -lam[ii].div_euclid(2);
            let rep: Weight = lam.iter().zip(&alpha).map(|(l, a)| l + p * a).collect();
            strings.entry(rep).or_default().insert(p, c);
        }
        let mut out = Character::zero();
        for (rep, coeffs) in strings {
            let lo = *coeffs.keys().next().unwrap();
            let hi = *coeffs.keys().next_back().unwrap();
            let mut acc = 0i64;
            for p in lo..=hi {
                acc += coeffs.get(&p).copied().unwrap_or(0);
                if p == hi {
                    if acc != 0 {
                        return Err(Error::Internal("Demazure division left a remainder".into()));
                    }
                } else if acc != 0 {
                    let w: Weight = rep.iter().zip(&alpha).map(|(r, a)| r - p * a).collect();
                    out.add_term(w, acc);
                }
            }
        }
        Ok(out)
    }

    /// Character `Lambda_{i_1}(e^{m_1 omega_{i_1}} Lambda_{i_2}(e^{m_2 omega_{i_2}} ...))`.
    pub fn bs_character(&self, word: &[usize], m: &[i64]) -> Result<Character> {
        if word.len() != m.len() {
            return Err(Error::LengthMismatch { expected: word.len(), got: m.len() });
        }
        self.check_word(word)?;
        let mut ch = Character::one(self.rank);
        for k in (0..word.len()).rev() {
            let shift = self.fundamental_weight(word[k]).iter().map(|x| x * m[k]).collect::<Vec<_>>();
            ch = self.demazure(word[k], &ch.shift(&shift))?;
        }
        Ok(ch)
    }

    /// Demazure character `Lambda_{i_1} ... Lambda_{i_n}(e^lambda)`.
    pub fn demazure_character(&self, word: &[usize], lambda: &[i64]) -> Result<Character> {
        self.check_word(word)?;
        let mut ch = Character::monomial(lambda.to_vec());
        for &i in word.iter().rev() {
            ch = self.demazure(i, &ch)?;
        }
        Ok(ch)
    }
}

/// Finite integer combination of torus characters `e^lambda`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character(BTreeMap<Weight, i64>);

impl Character {
    pub fn zero() -> Self {
        Character(BTreeMap::new())
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(vec![0; rank])
    }

    pub fn monomial(w: Weight) -> Self {
        Character(BTreeMap::from([(w, 1)]))
    }

    pub fn from_map(m: BTreeMap<Weight, i64>) -> Self {
        Character(m.into_iter().filter(|(_, c)| *c != 0).collect())
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(w.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&w);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.0.iter()
    }

    pub fn get(&self, w: &[i64]) -> i64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of multiplicities (the virtual dimension).
    pub fn dim(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn shift(&self, by: &[i64]) -> Character {
        Character(
            self.0
                .iter()
                .map(|(w, &c)| (w.iter().zip(by).map(|(a, b)| a + b).collect(), c))
                .collect(),
        )
    }

    pub fn add(&self, o: &Character) -> Character {
        let mut out = self.clone();
        for (w, &c) in o.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn mul(&self, o: &Character) -> Character {
        let mut out = Character::zero();
        for (a, &x) in self.iter() {
            for (b, &y) in o.iter() {
                out.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), x * y);
            }
        }
        out
    }

    pub fn as_map(&self) -> &BTreeMap<Weight, i64> {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CartanDatum {
        CartanDatum::type_a(2)
    }

    #[test]
    fn reflections() {
        let a1 = CartanDatum::type_a(1);
        assert_eq!(a1.simple_reflection(1, &[1]).unwrap(), vec![-1]);
        assert_eq!(a2().simple_reflection(1, &[1, 0]).unwrap(), vec![-1, 1]);
        assert_eq!(a2().simple_reflection(2, &[3, 0]).unwrap(), vec![3, 0]);
        assert!(matches!(a2().simple_reflection(3, &[1, 0]), Err(Error::IndexOutOfRange { .. })));
        // s_i(omega_j) = omega_j - delta_ij alpha_i
        for c in [CartanDatum::type_b(2), CartanDatum::type_g2(), CartanDatum::type_d(4)] {
            for i in 1..=c.rank {
                for j in 1..=c.rank {
                    let got = c.simple_reflection(i, &c.fundamental_weight(j)).unwrap();
                    let mut want = c.fundamental_weight(j);
                    if i == j {
                        for (w, a) in want.iter_mut().zip(c.simple_root(i)) {
                            *w -= a;
                        }
                    }
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn root_counts_and_weyl_orders() {
        let cases = [
            (CartanDatum::type_a(1), 1, 2),
            (CartanDatum::type_a(2), 3, 6),
            (CartanDatum::type_a(3), 6, 24),
            (CartanDatum::type_b(2), 4, 8),
            (CartanDatum::type_c(3), 9, 48),
            (CartanDatum::type_d(4), 12, 192),
            (CartanDatum::type_g2(), 6, 12),
        ];
        for (c, npos, order) in cases {
            assert_eq!(c.positive_roots().len(), npos);
            assert_eq!(c.weyl_group_words().len(), order);
        }
    }

    #[test]
    fn reducedness() {
        let c = a2();
        assert!(c.is_reduced(&[1, 2, 1]).unwrap());
        assert!(c.is_reduced(&[]).unwrap());
        assert!(!c.is_reduced(&[1, 1]).unwrap());
        assert!(!c.is_reduced(&[1, 2, 1, 2]).unwrap());
        assert_eq!(c.longest_reduced_words(), vec![vec![1, 2, 1], vec![2, 1, 2]]);
        // Brute-force: every word of the Weyl group enumeration is reduced.
        for w in CartanDatum::type_b(2).weyl_group_words() {
            assert!(CartanDatum::type_b(2).is_reduced(&w).unwrap());
        }
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(a2().weyl_dimension(&[0, 0]).unwrap(), 1);
        assert_eq!(a2().weyl_dimension(&[1, 1]).unwrap(), 8);
        assert_eq!(CartanDatum::type_a(1).weyl_dimension(&[5]).unwrap(), 6);
        assert_eq!(CartanDatum::type_b(2).weyl_dimension(&[1, 0]).unwrap(), 5);
        assert_eq!(CartanDatum::type_b(2).weyl_dimension(&[0, 1]).unwrap(), 4);
        assert_eq!(CartanDatum::type_g2().weyl_dimension(&[1, 0]).unwrap(), 7);
        assert_eq!(CartanDatum::type_g2().weyl_dimension(&[0, 1]).unwrap(), 14);
        assert!(matches!(a2().weyl_dimension(&[-1, 0]), Err(Error::NotDominant(_))));
    }

    /// Closed-form oracle for `Lambda_i(e^lambda)`.
    fn demazure_single_oracle(c: &CartanDatum, i: usize, lam: &[i64]) -> Character {
        let n = lam[i - 1];
        let alpha = c.simple_root(i);
        let at = |j: i64| -> Weight { lam.iter().zip(&alpha).map(|(l, a)| l - j * a).collect() };
        let mut out = Character::zero();
        if n >= 0 {
            for j in 0..=n {
                out.add_term(at(j), 1);
            }
        } else {
            for j in 1..=(-n - 1) {
                out.add_term(at(-j), -1);
            }
        }
        out
    }

    #[test]
    fn demazure_matches_closed_form() {
        let c = CartanDatum::type_b(2);
        for x in -4..=4 {
            for y in -4..=4 {
                for i in 1..=2 {
                    let lam = vec![x, y];
                    let got = c.demazure(i, &Character::monomial(lam.clone())).unwrap();
                    assert_eq!(got, demazure_single_oracle(&c, i, &lam));
                }
            }
        }
        let a1 = CartanDatum::type_a(1);
        assert_eq!(a1.demazure(1, &Character::one(1)).unwrap(), Character::one(1));
        assert_eq!(a1.demazure(1, &Character::monomial(vec![-1])).unwrap(), Character::zero());
    }

    #[test]
    fn bs_characters() {
        let c = a2();
        assert_eq!(c.bs_character(&[1, 2], &[0, 0]).unwrap(), Character::one(2));
        assert_eq!(c.bs_character(&[1, 2], &[0, 1]).unwrap().dim(), 3);
        assert_eq!(CartanDatum::type_a(1).bs_character(&[1], &[4]).unwrap().dim(), 5);
        assert!(matches!(c.bs_character(&[1, 2], &[1]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn longest_word_characters_have_weyl_dimension() {
        for c in [CartanDatum::type_a(1), a2(), CartanDatum::type_b(2)] {
            for w in c.longest_reduced_words() {
                for lam in [vec![0; c.rank], vec![1; c.rank], vec![2; c.rank]] {
                    let lam: Vec<i64> = lam.iter().enumerate().map(|(i, x)| x + i as i64).collect();
                    let ch = c.demazure_character(&w, &lam).unwrap();
                    assert_eq!(ch.dim() as u64, c.weyl_dimension(&lam).unwrap());
                }
            }
        }
    }
}

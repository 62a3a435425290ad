//! Sparse multivariate polynomials in the cell coordinates `t_1, ..., t_n`.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration is
//! lexicographic with `t_1` most significant and the first key is the
//! lexicographically minimal exponent, i.e. the vertical-flag valuation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, Q};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    pub nvars: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Q::one())
    }

    pub fn monomial(e: Exponent, c: Q) -> Self {
        let nvars = e.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { nvars, terms }
    }

    /// The variable `t_j` (1-based).
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j - 1] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// Lexicographically minimal exponent (`t_1` most significant).
    pub fn lex_min(&self) -> Option<&Exponent> {
        self.terms.keys().next()
    }

    pub fn max_degree(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e[j - 1]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(o, &Q::one());
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(o, &-Q::one());
        out
    }

    /// `self += c * o`.
    pub fn add_assign_scaled(&mut self, o: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (e, x) in &o.terms {
            self.add_term(e.clone(), x * c);
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Exponent = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Sets `t_1 = 0` and renames `t_{j+1}` to `t_j`.
    pub fn restrict_first(&self) -> Poly {
        Poly::from_terms(
            self.nvars - 1,
            self.terms
                .iter()
                .filter(|(e, _)| e[0] == 0)
                .map(|(e, c)| (e[1..].to_vec(), c.clone())),
        )
    }

    /// Divides by `t^e`; `None` if some term is not divisible.
    pub fn div_monomial(&self, e: &[u32]) -> Option<Poly> {
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            if a.iter().zip(e).any(|(x, y)| x < y) {
                return None;
            }
            out.terms.insert(a.iter().zip(e).map(|(x, y)| x - y).collect(), c.clone());
        }
        Some(out)
    }

    /// Divides all coefficients by the coefficient of the lex-min term.
    pub fn normalized(&self) -> Poly {
        match self.terms.values().next() {
            Some(c) => self.scale(&(Q::one() / c)),
            None => self.clone(),
        }
    }

    /// Substitutes `t_j = a_j + b_j s` for all `j`, giving a univariate polynomial in `s`.
    pub fn on_line(&self, a: &[Q], b: &[Q]) -> crate::arith::UPoly {
        use crate::arith::UPoly;
        let lines: Vec<UPoly> = a
            .iter()
            .zip(b)
            .map(|(x, y)| UPoly::from_coeffs(vec![x.clone(), y.clone()]))
            .collect();
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let mut term = UPoly::constant(c.clone());
            for (l, &k) in lines.iter().zip(e) {
                if k > 0 {
                    term = &term * &l.pow(k);
                }
            }
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(j, &k)| if k == 1 { format!("t{}", j + 1) } else { format!("t{}^{}", j + 1, k) })
                    .collect();
                if mono.is_empty() {
                    fmt_q(c)
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", fmt_q(c), mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn lex_min_is_valuation_order() {
        // t1^2 t3 + t2: the lex-min exponent is (0,1,0).
        let p = Poly::from_terms(3, [(vec![2, 0, 1], q(1)), (vec![0, 1, 0], q(1))]);
        assert_eq!(p.lex_min(), Some(&vec![0, 1, 0]));
    }

    #[test]
    fn arithmetic() {
        let t1 = Poly::var(2, 1);
        let t2 = Poly::var(2, 2);
        let s = t1.add(&t2);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), q(2));
        assert_eq!(sq.sub(&sq), Poly::zero(2));
        assert_eq!(sq.eval(&[q(1), q(2)]), q(9));
        assert_eq!(sq.restrict_first(), Poly::monomial(vec![2], q(1)));
        assert_eq!(t1.mul(&t2).div_monomial(&[1, 0]), Some(t2.clone()));
        assert_eq!(t2.div_monomial(&[1, 0]), None);
        let line = sq.on_line(&[q(1), q(0)], &[q(0), q(1)]);
        assert_eq!(line.coeffs(), &[q(1), q(2), q(1)]);
    }
}

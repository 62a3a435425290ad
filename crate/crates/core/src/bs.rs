//! The Bott-Samelson context: Cartan datum, word, fundamental
//! representations and memoized section spaces.
//!
//! Points of the big cell are `(exp(t_1 f_{i_1}), ..., exp(t_n f_{i_n}))`.
//! A section of `O(m)` (canonical coordinates) is a function `F` on
//! `P_{i_1} x ... x P_{i_n}` with `F(p . b) = prod_k omega_{i_k}(b_k)^{m_k} F(p)`,
//! where `b` acts by `(p_1 b_1, b_1^{-1} p_2 b_2, ...)`; on the big cell it
//! restricts to a polynomial in the `t_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::picard::BasisChange;
use crate::rep::GroupModel;
use crate::rootsys::CartanDatum;
use crate::sections::charts::ChartData;
use crate::sections::nef::NefSpace;
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_0b5e;

pub struct BottSamelson {
    pub cartan: CartanDatum,
    pub word: Vec<usize>,
    pub group: GroupModel,
    pub seed: u64,
    pub(crate) nef_cache: Mutex<HashMap<Vec<i64>, Arc<NefSpace>>>,
    pub(crate) glue_cache: Mutex<HashMap<Vec<i64>, Arc<crate::sections::SectionBasis>>>,
    pub(crate) charts: OnceLock<Result<Arc<ChartData>>>,
    pub(crate) basis_change: OnceLock<Result<BasisChange>>,
}

impl std::fmt::Debug for BottSamelson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BottSamelson")
            .field("cartan", &self.cartan)
            .field("word", &self.word)
            .finish()
    }
}

impl BottSamelson {
    /// Requires a reduced word; representations are the built-in ones.
    pub fn new(cartan: CartanDatum, word: Vec<usize>) -> Result<Self> {
        let group = GroupModel::new(&cartan)?;
        Self::with_group(group, word)
    }

    pub fn with_group(group: GroupModel, word: Vec<usize>) -> Result<Self> {
        let cartan = group.cartan.clone();
        if !cartan.is_reduced(&word)? {
            return Err(Error::NotReduced(word));
        }
        Ok(BottSamelson {
            cartan,
            word,
            group,
            seed: DEFAULT_SEED,
            nef_cache: Mutex::new(HashMap::new()),
            glue_cache: Mutex::new(HashMap::new()),
            charts: OnceLock::new(),
            basis_change: OnceLock::new(),
        })
    }

    /// Convenience constructor from a type name such as `"A2"`.
    pub fn from_type(name: &str, word: &[usize]) -> Result<Self> {
        Self::new(CartanDatum::parse(name)?, word.to_vec())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of factors `n` (the dimension of the variety).
    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.n() {
            Err(Error::LengthMismatch { expected: self.n(), got: v.len() })
        } else {
            Ok(())
        }
    }

    /// The truncated variety `Y_1 = Z_{(s_{i_2}, ..., s_{i_n})}`.
    pub fn tail(&self) -> Result<BottSamelson> {
        if self.n() == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(BottSamelson::with_group(self.group.clone(), self.word[1..].to_vec())?.with_seed(self.seed))
    }

    /// The prefix variety `Z_{(s_{i_1}, ..., s_{i_{n-1}})}`.
    pub fn prefix(&self) -> Result<BottSamelson> {
        if self.n() == 0 {
            return Err(Error::EmptyInput);
        }
        Ok(BottSamelson::with_group(self.group.clone(), self.word[..self.n() - 1].to_vec())?.with_seed(self.seed))
    }

    /// `sum_k m_k omega_{i_k}`: the highest weight of `H^0(O(m))`.
    pub fn top_weight(&self, m: &[i64]) -> Vec<i64> {
        let mut w = vec![0; self.cartan.rank];
        for (k, &i) in self.word.iter().enumerate() {
            w[i - 1] += m[k];
        }
        w
    }

    /// Torus weight of the monomial `t^a` in `O(m)`:
    /// `sum_k m_k omega_{i_k} - sum_j a_j alpha_{i_j}`.
    pub fn monomial_weight(&self, m: &[i64], a: &[u32]) -> Vec<i64> {
        let mut w = self.top_weight(m);
        for (j, &i) in self.word.iter().enumerate() {
            if a[j] == 0 {
                continue;
            }
            for (x, r) in w.iter_mut().zip(self.cartan.simple_root(i)) {
                *x -= r * a[j] as i64;
            }
        }
        w
    }
}

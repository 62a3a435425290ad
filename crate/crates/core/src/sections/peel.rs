//! Fixed boundary components of effective classes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{UPoly, Q};
use crate::bs::BottSamelson;
use crate::picard::DivisorClass;
use crate::sections::{h0_dim, sections};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelResult {
    /// Fixed part `N = sum a_j Z_{w(j)}` (effective coordinates).
    pub fixed: DivisorClass,
    /// `kD - N` (effective coordinates).
    pub movable: DivisorClass,
    pub movable_dim: usize,
    /// Set when the sections of the movable part still share a nonconstant
    /// factor, i.e. a fixed component that is not a boundary divisor.
    pub residual_warning: Option<String>,
}

/// Peels boundary divisors off `kD` while the section dimension is unchanged.
pub fn fixed_part_peel(bs: &BottSamelson, d: &DivisorClass, k: u32) -> Result<PeelResult> {
    let eff = d.to_effective(bs)?;
    if eff.coords.iter().any(|&x| x < 0) {
        return Err(Error::NotEffective(eff.coords));
    }
    let n = bs.n();
    let mut e: Vec<i64> = eff.coords.iter().map(|x| x * k as i64).collect();
    let dim = h0_dim(bs, &DivisorClass::effective(e.clone()))?;
    let mut fixed = vec![0i64; n];
    loop {
        let mut changed = false;
        for j in 0..n {
            while e[j] > 0 {
                let mut trial = e.clone();
                trial[j] -= 1;
                if h0_dim(bs, &DivisorClass::effective(trial.clone()))? == dim {
                    e = trial;
                    fixed[j] += 1;
                    changed = true;
                } else {
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let movable = DivisorClass::effective(e);
    let residual_warning = residual_factor(bs, &movable)?;
    Ok(PeelResult { fixed: DivisorClass::effective(fixed), movable, movable_dim: dim, residual_warning })
}

/// Restricts the sections to random lines; a nonconstant gcd on every line
/// signals a common factor.
fn residual_factor(bs: &BottSamelson, d: &DivisorClass) -> Result<Option<String>> {
    let basis = sections(bs, d)?;
    if basis.dim() == 0 {
        return Ok(None);
    }
    let n = bs.n();
    let mut rng = ChaCha8Rng::seed_from_u64(bs.seed ^ 0xfeed);
    let mut min_deg = usize::MAX;
    for _ in 0..3 {
        let a: Vec<Q> = (0..n).map(|_| Q::from_integer(rng.gen_range(-9i64..=9).into())).collect();
        let b: Vec<Q> = (0..n).map(|_| Q::from_integer(rng.gen_range(1i64..=9).into())).collect();
        let mut g = UPoly::zero();
        for s in &basis.sections {
            g = UPoly::gcd(&g, &s.poly.on_line(&a, &b));
        }
        min_deg = min_deg.min(g.degree().unwrap_or(0));
    }
    Ok((min_deg > 0).then(|| format!("sections of {:?} share a factor of degree {min_deg}", d.coords)))
}

//! Pointed rational polyhedral cones.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd::{cone_from_constraints, normalize};
use crate::arith::{q_int, Q};
use crate::{Error, Result};

/// A pointed cone given by its extreme rays (primitive integer vectors in
/// lexicographic order) and facet normals `a` with `a . x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCone {
    pub ambient: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub facets: Vec<Vec<BigInt>>,
    pub equations: Vec<Vec<BigInt>>,
}

fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(q_int).collect()
}

fn to_z(v: &[Q]) -> Vec<BigInt> {
    normalize(v).iter().map(|x| x.to_integer()).collect()
}

impl RationalCone {
    /// The cone generated by `gens`, reduced to its extreme rays.
    pub fn from_generators(ambient: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        let gens: Vec<Vec<Q>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).map(|g| to_q(g)).collect();
        if gens.is_empty() {
            return Ok(RationalCone { ambient, rays: vec![], facets: vec![], equations: vec![] });
        }
        let dual = cone_from_constraints(ambient, &gens, &[]);
        let facets: Vec<Vec<Q>> = dual.rays.clone();
        let equations: Vec<Vec<Q>> = dual.lineality.iter().map(|l| normalize(l)).collect();
        let primal = cone_from_constraints(ambient, &facets, &equations);
        if !primal.lineality.is_empty() {
            return Err(Error::NotPointed);
        }
        let mut rays: Vec<Vec<BigInt>> = primal.rays.iter().map(|r| to_z(r)).collect();
        rays.sort();
        rays.dedup();
        // facets in canonical form: recompute from the extreme rays
        Ok(Self::canonical(ambient, rays))
    }

    fn canonical(ambient: usize, rays: Vec<Vec<BigInt>>) -> Self {
        let rq: Vec<Vec<Q>> = rays.iter().map(|r| to_q(r)).collect();
        let dual = cone_from_constraints(ambient, &rq, &[]);
        let mut eqs: Vec<Vec<Q>> = dual.lineality.clone();
        let piv = crate::linalg::rref(&mut eqs);
        eqs.truncate(piv.len());
        let mut facets: Vec<Vec<BigInt>> = dual
            .rays
            .iter()
            .map(|f| {
                let mut f = f.clone();
                for (e, &p) in eqs.iter().zip(&piv) {
                    let c = &f[p] / &e[p];
                    for (x, y) in f.iter_mut().zip(e) {
                        *x -= &c * y;
                    }
                }
                to_z(&f)
            })
            .collect();
        facets.sort();
        facets.dedup();
        let mut equations: Vec<Vec<BigInt>> = eqs.iter().map(|e| to_z(e)).collect();
        equations.sort();
        RationalCone { ambient, rays, facets, equations }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        let dot = |a: &[BigInt]| -> BigInt { a.iter().zip(x).map(|(u, v)| u * v).sum() };
        self.facets.iter().all(|f| !dot(f).is_negative()) && self.equations.iter().all(|e| dot(e).is_zero())
    }

    pub fn contains_q(&self, x: &[Q]) -> bool {
        let dot = |a: &[BigInt]| -> Q { a.iter().zip(x).map(|(u, v)| q_int(u) * v).sum() };
        self.facets.iter().all(|f| !dot(f).is_negative()) && self.equations.iter().all(|e| dot(e).is_zero())
    }

    /// Recomputes the extreme rays from the facets and compares.
    pub fn validate(&self) -> Result<()> {
        if self.rays.is_empty() {
            return Ok(());
        }
        let f: Vec<Vec<Q>> = self.facets.iter().map(|x| to_q(x)).collect();
        let e: Vec<Vec<Q>> = self.equations.iter().map(|x| to_q(x)).collect();
        let g = cone_from_constraints(self.ambient, &f, &e);
        let mut rays: Vec<Vec<BigInt>> = g.rays.iter().map(|r| to_z(r)).collect();
        rays.sort();
        if !g.lineality.is_empty() || rays != self.rays {
            return Err(Error::VerificationFailure("cone V/H representations disagree".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = |rows: &[Vec<BigInt>]| -> Vec<Vec<String>> {
            rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        };
        serde_json::json!({
            "ambient": self.ambient,
            "rays": s(&self.rays),
            "facets": s(&self.facets),
            "equations": s(&self.equations),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            ambient: usize,
            rays: Vec<Vec<String>>,
            facets: Vec<Vec<String>>,
            #[serde(default)]
            equations: Vec<Vec<String>>,
        }
        let f: File = serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
        let p = |rows: &[Vec<String>]| -> Result<Vec<Vec<BigInt>>> {
            rows.iter()
                .map(|r| r.iter().map(|x| x.parse::<BigInt>().map_err(|_| Error::Json(format!("bad integer {x:?}")))).collect())
                .collect()
        };
        let c = RationalCone { ambient: f.ambient, rays: p(&f.rays)?, facets: p(&f.facets)?, equations: p(&f.equations)? };
        c.validate()?;
        Ok(c)
    }
}

/// Extreme rays of the cone generated by integer vectors.
pub fn extreme_rays(ambient: usize, gens: &[Vec<i64>]) -> Result<RationalCone> {
    let g: Vec<Vec<BigInt>> = gens.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    RationalCone::from_generators(ambient, &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn planar_interior_generator() {
        let c = extreme_rays(2, &[vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap();
        assert_eq!(c.rays, z(&[&[0, 1], &[1, 1]]));
        let c = extreme_rays(2, &[vec![0, 1], vec![2, 2], vec![1, 2]]).unwrap();
        assert_eq!(c.rays, z(&[&[0, 1], &[1, 1]]));
        c.validate().unwrap();
    }

    #[test]
    fn single_ray_and_line() {
        let c = extreme_rays(3, &[vec![0, 2, 4]]).unwrap();
        assert_eq!(c.rays, z(&[&[0, 1, 2]]));
        assert_eq!(extreme_rays(2, &[vec![1, 0], vec![-1, 0]]), Err(Error::NotPointed));
        let zero = extreme_rays(2, &[]).unwrap();
        assert!(zero.rays.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let c = extreme_rays(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(c.rays.len(), 3);
        assert_eq!(RationalCone::from_json(&c.to_json()).unwrap(), c);
    }
}

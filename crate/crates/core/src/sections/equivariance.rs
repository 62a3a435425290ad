//! Exact spot checks of the transformation law `F(q . b) = chi(b) F(q)`.
//!
//! Basis sections of nef classes are evaluated as genuine functions on
//! `P_{i_1} x ... x P_{i_n}` through their construction history (products of
//! matrix coefficients), independently of their big-cell polynomials. Each
//! trial draws a random `q` and `b in B^n` with rational entries and checks
//!
//! * `F(q . b) = prod_k omega_{i_k}(b_k)^{m_k} F(q)`, and
//! * `F(q) = chi(beta_q) s(t_q)` for the big-cell decomposition of `q`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Q;
use crate::bs::BottSamelson;
use crate::linalg::{solve, Mat};
use crate::poly::Poly;
use crate::sections::charts::{decompose, inverse, matrices, Gen, GroupElement};
use crate::sections::nef::{nef_space, NefSpace};
use crate::{Error, Result};

fn random_q<R: Rng>(rng: &mut R) -> Q {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=5);
    Q::new(n.into(), d.into())
}

fn random_nonzero_q<R: Rng>(rng: &mut R) -> Q {
    loop {
        let x = random_q(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random element of the Borel subgroup.
pub fn random_borel<R: Rng>(bs: &BottSamelson, rng: &mut R) -> GroupElement<Q> {
    let r = bs.cartan.rank;
    let mut g = Vec::new();
    for _ in 0..2 {
        for i in 1..=r {
            g.push(Gen::E(i, random_q(rng)));
        }
    }
    g.push(Gen::H((0..r).map(|_| random_nonzero_q(rng)).collect()));
    g
}

/// A random element of the minimal parabolic `P_i`.
pub fn random_parabolic<R: Rng>(bs: &BottSamelson, i: usize, rng: &mut R) -> GroupElement<Q> {
    let mut g = vec![Gen::F(i, random_nonzero_q(rng))];
    g.extend(random_borel(bs, rng));
    g
}

fn torus_part(b: &[Gen<Q>]) -> Vec<Q> {
    b.iter()
        .rev()
        .find_map(|g| if let Gen::H(z) = g { Some(z.clone()) } else { None })
        .expect("Borel element carries a torus factor")
}

/// Values of every basis section of the nef class `m` at the point `p`
/// (matrices of each factor in all fundamental representations).
pub fn evaluate_nef(bs: &BottSamelson, space: &NefSpace, p: &[Vec<Mat<Q>>]) -> Result<Vec<Q>> {
    // prefix products p_1 ... p_k in every representation
    let mut prefix: Vec<Vec<Mat<Q>>> = Vec::new();
    let mut cur: Vec<Mat<Q>> = bs.group.reps.iter().map(|r| Mat::identity(r.dim())).collect();
    for pk in p {
        cur = cur.iter().zip(pk).map(|(a, b)| a.mul(b)).collect();
        prefix.push(cur.clone());
    }
    let coeff = |k: usize, xi: usize| -> Q {
        let i = bs.word[k - 1];
        let rep = bs.group.rep(i);
        prefix[k - 1][i - 1].get(xi, rep.highest).clone()
    };
    // walk the construction chain from the zero class upwards
    let mut chain = vec![space.class.clone()];
    let mut node = nef_space(bs, &space.class)?;
    while let Some((parent, _)) = &node.parent {
        chain.push(parent.clone());
        node = nef_space(bs, parent)?;
    }
    chain.reverse();
    let mut values = vec![Q::one()];
    for cls in chain.iter().skip(1) {
        let sp = nef_space(bs, cls)?;
        let (_, k) = sp.parent.clone().unwrap();
        values = sp
            .provenance
            .iter()
            .map(|prov| {
                prov.iter()
                    .map(|(c, pidx, xi)| c * &values[*pidx] * coeff(k, *xi))
                    .sum()
            })
            .collect();
    }
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivarianceReport {
    pub class: Vec<i64>,
    pub sections: usize,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
}

/// Runs `trials` random specializations for every basis section of the nef class `m`.
pub fn check_equivariance<R: Rng>(bs: &BottSamelson, m: &[i64], trials: usize, rng: &mut R) -> Result<EquivarianceReport> {
    let space = nef_space(bs, m)?;
    let n = bs.n();
    let mut checks = 0;
    let mut failures = 0;
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        if attempts > 20 * trials + 20 {
            return Err(Error::Internal("could not draw generic group elements".into()));
        }
        let q: Vec<GroupElement<Q>> = bs.word.iter().map(|&i| random_parabolic(bs, i, rng)).collect();
        let b: Vec<GroupElement<Q>> = (0..n).map(|_| random_borel(bs, rng)).collect();
        // q . b = (q_1 b_1, b_1^{-1} q_2 b_2, ...)
        let qb: Vec<GroupElement<Q>> = (0..n)
            .map(|k| {
                let mut x = Vec::new();
                if k > 0 {
                    x.extend(inverse(&b[k - 1]));
                }
                x.extend(q[k].clone());
                x.extend(b[k].clone());
                x
            })
            .collect();
        let qm: Vec<Vec<Mat<Q>>> = q.iter().map(|x| matrices(&bs.group, x)).collect();
        let qbm: Vec<Vec<Mat<Q>>> = qb.iter().map(|x| matrices(&bs.group, x)).collect();
        let Ok(dec) = decompose(bs, 1, &qm) else { continue };
        let fq = evaluate_nef(bs, &space, &qm)?;
        let fqb = evaluate_nef(bs, &space, &qbm)?;
        let mut chi_b = Q::one();
        let mut chi_q = Q::one();
        for k in 0..n {
            let z = torus_part(&b[k]);
            let i = bs.word[k];
            chi_b *= pow_i(&z[i - 1], m[k]);
            chi_q *= pow_i(&dec.a[k], m[k]);
        }
        for (idx, s) in space.sections.iter().enumerate() {
            checks += 2;
            if fqb[idx] != &chi_b * &fq[idx] {
                failures += 1;
            }
            if fq[idx] != &chi_q * s.eval(&dec.t) {
                failures += 1;
            }
        }
        done += 1;
    }
    Ok(EquivarianceReport { class: m.to_vec(), sections: space.dim(), trials, checks, failures })
}

fn pow_i(x: &Q, e: i64) -> Q {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        Q::one() / p
    }
}

/// Coordinates of `target` in the span of `basis` (as polynomials), if any.
pub fn express_in(basis: &[Poly], target: &Poly) -> Option<Vec<Q>> {
    let mut monos: Vec<Vec<u32>> = basis
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect();
    monos.sort();
    monos.dedup();
    let a: Vec<Vec<Q>> = monos
        .iter()
        .map(|e| basis.iter().map(|p| p.coeff(e)).collect())
        .collect();
    let b: Vec<Q> = monos.iter().map(|e| target.coeff(e)).collect();
    solve(&a, &b, basis.len())
}

/// Checks the transformation law for sections given only as polynomials
/// (e.g. from the gluing solver) by expressing them in the nef basis.
pub fn check_equivariance_of<R: Rng>(
    bs: &BottSamelson,
    m: &[i64],
    polys: &[Poly],
    trials: usize,
    rng: &mut R,
) -> Result<EquivarianceReport> {
    let space = nef_space(bs, m)?;
    let coords: Vec<Vec<Q>> = polys
        .iter()
        .map(|p| express_in(&space.sections, p).ok_or_else(|| Error::VerificationFailure("section outside the nef span".into())))
        .collect::<Result<_>>()?;
    let n = bs.n();
    let mut checks = 0;
    let mut failures = 0;
    for _ in 0..trials {
        let q: Vec<GroupElement<Q>> = bs.word.iter().map(|&i| random_parabolic(bs, i, rng)).collect();
        let b: Vec<GroupElement<Q>> = (0..n).map(|_| random_borel(bs, rng)).collect();
        let qb: Vec<GroupElement<Q>> = (0..n)
            .map(|k| {
                let mut x = Vec::new();
                if k > 0 {
                    x.extend(inverse(&b[k - 1]));
                }
                x.extend(q[k].clone());
                x.extend(b[k].clone());
                x
            })
            .collect();
        let fq = evaluate_nef(bs, &space, &q.iter().map(|x| matrices(&bs.group, x)).collect::<Vec<_>>())?;
        let fqb = evaluate_nef(bs, &space, &qb.iter().map(|x| matrices(&bs.group, x)).collect::<Vec<_>>())?;
        let mut chi_b = Q::one();
        for k in 0..n {
            chi_b *= pow_i(&torus_part(&b[k])[bs.word[k] - 1], m[k]);
        }
        for c in &coords {
            let v_q: Q = c.iter().zip(&fq).map(|(x, y)| x * y).sum();
            let v_qb: Q = c.iter().zip(&fqb).map(|(x, y)| x * y).sum();
            checks += 1;
            if v_qb != &chi_b * &v_q {
                failures += 1;
            }
        }
    }
    Ok(EquivarianceReport { class: m.to_vec(), sections: polys.len(), trials, checks, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a2_law_holds() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = check_equivariance(&bs, &[1, 1], 5, &mut rng).unwrap();
        assert_eq!(rep.failures, 0);
        assert_eq!(rep.checks, 2 * 5 * rep.sections);
    }

    #[test]
    fn wrong_character_is_detected() {
        // Evaluating with the wrong multidegree must fail the law.
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let space = nef_space(&bs, &[2]).unwrap();
        let q: Vec<GroupElement<Q>> = vec![random_parabolic(&bs, 1, &mut rng)];
        let b = random_borel(&bs, &mut rng);
        let mut qb = q[0].clone();
        qb.extend(b.clone());
        let fq = evaluate_nef(&bs, &space, &[matrices(&bs.group, &q[0])]).unwrap();
        let fqb = evaluate_nef(&bs, &space, &[matrices(&bs.group, &qb)]).unwrap();
        let z = torus_part(&b)[0].clone();
        assert!(fq.iter().zip(&fqb).all(|(x, y)| *y == &z * &z * x));
        assert!(fq.iter().zip(&fqb).any(|(x, y)| !x.is_zero() && *y != &z * x));
    }
}

//! Property tests for the invariants of every module.

use std::sync::OnceLock;

use bsok_core::arith::{q, Q};
use bsok_core::okounkov::{body, global_cone, level_set};
use bsok_core::picard::{compute_basis_change, is_effective, is_nef, volume, DivisorClass};
use bsok_core::polyhedra::RationalPolytope;
use bsok_core::poly::Poly;
use bsok_core::rootsys::{CartanDatum, Character};
use bsok_core::sections::{h0_dim, sections};
use bsok_core::valuation::{adapted_basis, valuation_poly};
use bsok_core::weights::{weight_projection, weighted_semigroup};
use bsok_core::BottSamelson;
use num_bigint::BigInt;
use proptest::prelude::*;

fn fixtures() -> &'static [BottSamelson] {
    static F: OnceLock<Vec<BottSamelson>> = OnceLock::new();
    F.get_or_init(|| {
        [("A1", vec![1]), ("A2", vec![1, 2]), ("A2", vec![2, 1]), ("B2", vec![1, 2]), ("B2", vec![2, 1]), ("A2", vec![1, 2, 1]), ("A3", vec![2, 1, 3])]
            .iter()
            .map(|(t, w)| BottSamelson::from_type(t, w).unwrap())
            .collect()
    })
}

fn fixture_and_class(max: i64) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (0..fixtures().len()).prop_flat_map(move |f| {
        let n = fixtures()[f].n();
        (Just(f), prop::collection::vec(0..=max, n))
    })
}

fn cartans() -> Vec<CartanDatum> {
    vec![
        CartanDatum::type_a(2),
        CartanDatum::type_a(3),
        CartanDatum::type_b(2),
        CartanDatum::type_c(3),
        CartanDatum::type_g2(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflections_are_involutions(c in 0usize..5, i in 1usize..=3, lam in prop::collection::vec(-4i64..=4, 3)) {
        let cd = &cartans()[c];
        let i = 1 + (i - 1) % cd.rank;
        let lam = &lam[..cd.rank];
        let once = cd.simple_reflection(i, lam).unwrap();
        prop_assert_eq!(cd.simple_reflection(i, &once).unwrap(), lam.to_vec());
    }

    #[test]
    fn demazure_is_idempotent(c in 0usize..5, i in 1usize..=3, lam in prop::collection::vec(-3i64..=3, 3)) {
        let cd = &cartans()[c];
        let i = 1 + (i - 1) % cd.rank;
        let ch = Character::monomial(lam[..cd.rank].to_vec());
        let once = cd.demazure(i, &ch).unwrap();
        prop_assert_eq!(cd.demazure(i, &once).unwrap(), once);
    }

    #[test]
    fn longest_word_gives_weyl_dimension(c in 0usize..5, lam in prop::collection::vec(0i64..=2, 3)) {
        let cd = &cartans()[c];
        let lam = &lam[..cd.rank];
        let w = &cd.longest_reduced_words()[0];
        let ch = cd.demazure_character(w, lam).unwrap();
        prop_assert_eq!(ch.dim() as u64, cd.weyl_dimension(lam).unwrap());
    }

    #[test]
    fn basis_conversions_round_trip((f, m) in (0..fixtures().len()).prop_flat_map(|f| (Just(f), prop::collection::vec(-5i64..=5, fixtures()[f].n())))) {
        let bs = &fixtures()[f];
        let d = DivisorClass::effective(m.clone());
        prop_assert_eq!(d.to_canonical(bs).unwrap().to_effective(bs).unwrap(), d.clone());
        let c = DivisorClass::canonical(m);
        prop_assert_eq!(c.to_effective(bs).unwrap().to_canonical(bs).unwrap(), c);
    }

    #[test]
    fn nef_implies_effective((f, m) in fixture_and_class(3)) {
        let bs = &fixtures()[f];
        let d = DivisorClass::canonical(m);
        prop_assert!(is_nef(bs, &d).unwrap());
        prop_assert!(is_effective(bs, &d).unwrap());
    }

    #[test]
    fn volume_is_homogeneous((f, m) in fixture_and_class(2), k in 1i64..=3) {
        let bs = &fixtures()[f];
        let d = DivisorClass::canonical(m);
        let v = volume(bs, &d).unwrap();
        let kn = Q::from_integer(BigInt::from(k).pow(bs.n() as u32));
        prop_assert_eq!(volume(bs, &d.scale(k)).unwrap(), v * kn);
    }

    #[test]
    fn adapted_basis_counts_dimension((f, m) in fixture_and_class(2), k in 1i64..=2) {
        let bs = &fixtures()[f];
        let d = DivisorClass::canonical(m).scale(k);
        let b = sections(bs, &d).unwrap();
        let a = adapted_basis(&b);
        let mut nus: Vec<_> = a.sections.iter().map(|s| valuation_poly(&s.poly).unwrap()).collect();
        nus.sort();
        nus.dedup();
        prop_assert_eq!(nus.len(), h0_dim(bs, &d).unwrap());
        prop_assert_eq!(nus.len(), bs.cartan.bs_character(&bs.word, &d.coords).unwrap().dim() as usize);
    }

    #[test]
    fn valuation_product_rule((f, m) in fixture_and_class(1), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let bs = &fixtures()[f];
        let b = sections(bs, &DivisorClass::canonical(m)).unwrap();
        let s = &b.sections[i.index(b.dim())].poly;
        let t = &b.sections[j.index(b.dim())].poly;
        let sum: Vec<u32> = valuation_poly(s).unwrap().iter().zip(valuation_poly(t).unwrap()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(valuation_poly(&s.mul(t)).unwrap(), sum);
    }

    #[test]
    fn valuation_of_sum_is_at_least_the_min(a in prop::collection::btree_map(prop::collection::vec(0u32..3, 3), -3i64..=3, 1..5),
                                            b in prop::collection::btree_map(prop::collection::vec(0u32..3, 3), -3i64..=3, 1..5)) {
        let p = Poly::from_terms(3, a.into_iter().map(|(e, c)| (e, q(c))));
        let r = Poly::from_terms(3, b.into_iter().map(|(e, c)| (e, q(c))));
        let s = p.add(&r);
        if let (Some(x), Some(y), Some(z)) = (p.lex_min(), r.lex_min(), s.lex_min()) {
            prop_assert!(z >= x.min(y));
        }
    }

    #[test]
    fn flag_compatibility((f, m) in fixture_and_class(2)) {
        let bs = &fixtures()[f];
        prop_assume!(bs.n() >= 2);
        let b = adapted_basis(&sections(bs, &DivisorClass::canonical(m)).unwrap());
        for s in &b.sections {
            let nu = valuation_poly(&s.poly).unwrap();
            if nu[0] == 0 {
                let r = s.poly.restrict_first();
                prop_assert_eq!(valuation_poly(&r).unwrap(), nu[1..].to_vec());
            }
        }
    }

    #[test]
    fn bodies_grow_with_level((f, m) in fixture_and_class(1)) {
        let bs = &fixtures()[f];
        let d = DivisorClass::canonical(m);
        let b1 = body(bs, &d, 1).unwrap().polytope;
        let b2 = body(bs, &d, 2).unwrap().polytope;
        prop_assert!(b2.contains_polytope(&b1));
    }

    #[test]
    fn bodies_are_superadditive((f, m) in fixture_and_class(1), m2 in prop::collection::vec(0i64..=1, 3)) {
        let bs = &fixtures()[f];
        let d1 = DivisorClass::canonical(m.clone());
        let d2 = DivisorClass::canonical(m2[..bs.n()].to_vec());
        let sum = DivisorClass::canonical(m.iter().zip(&m2).map(|(a, b)| a + b).collect());
        let b1 = body(bs, &d1, 2).unwrap().polytope;
        let b2 = body(bs, &d2, 2).unwrap().polytope;
        let bsum = body(bs, &sum, 2).unwrap().polytope;
        prop_assert!(bsum.contains_polytope(&b1.minkowski_sum(&b2).unwrap()));
    }

    #[test]
    fn weights_are_well_defined_and_affine((f, m) in fixture_and_class(2)) {
        let bs = &fixtures()[f];
        let d = DivisorClass::canonical(m);
        let ws = weighted_semigroup(bs, &d, 2, &None).unwrap();
        let map = weight_projection(&ws).unwrap();
        for p in &ws.points {
            let nu: Vec<Q> = p.nu.iter().map(|&x| q(x as i64)).collect();
            let w: Vec<Q> = p.weight.iter().map(|&x| q(x)).collect();
            prop_assert_eq!(map.apply(&nu, &q(p.level as i64)), w);
        }
        // the weight multiset is the character of kD
        for k in 1..=2u32 {
            let mut ch = Character::zero();
            for p in ws.points.iter().filter(|p| p.level == k) {
                ch.add_term(p.weight.clone(), 1);
            }
            prop_assert_eq!(ch, bs.cartan.bs_character(&bs.word, &d.scale(k as i64).coords).unwrap());
        }
    }

    #[test]
    fn hull_round_trip(points in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..9)) {
        let pts: Vec<Vec<Q>> = points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        let h = RationalPolytope::hull(&pts).unwrap();
        h.validate().unwrap();
        for p in &pts {
            prop_assert!(h.contains(p));
        }
        prop_assert_eq!(RationalPolytope::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn volume_is_unimodular_invariant(points in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4..8),
                                      a in -2i64..=2, b in -2i64..=2, c in -2i64..=2) {
        let pts: Vec<Vec<Q>> = points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        let h = RationalPolytope::hull(&pts).unwrap();
        // upper unitriangular integer matrix
        let u = [[1, a, b], [0, 1, c], [0, 0, 1]];
        let img: Vec<Vec<Q>> = pts
            .iter()
            .map(|p| (0..3).map(|i| (0..3).map(|j| q(u[i][j]) * &p[j]).sum()).collect())
            .collect();
        prop_assert_eq!(RationalPolytope::hull(&img).unwrap().volume(), h.volume());
    }

    #[test]
    fn ehrhart_counts_are_polynomial(points in prop::collection::vec(prop::collection::vec(0i64..=2, 2), 3..6)) {
        let pts: Vec<Vec<Q>> = points.iter().map(|p| p.iter().map(|&x| q(x)).collect()).collect();
        let h = RationalPolytope::hull(&pts).unwrap();
        let d = h.dim().max(0) as usize;
        let counts: Vec<i64> = (1..=(d as u32 + 2)).map(|k| h.lattice_points(k).len() as i64).collect();
        // for a lattice polytope the (d+1)-st finite difference vanishes
        let mut diffs = counts;
        for _ in 0..=d {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        prop_assert!(diffs.iter().all(|&x| x == 0));
    }
}

#[test]
fn basis_change_restricts_to_prefix() {
    for (t, w) in [("A2", vec![1, 2, 1]), ("B2", vec![1, 2, 1]), ("A3", vec![1, 2, 3]), ("A2", vec![1, 2])] {
        let bs = BottSamelson::from_type(t, &w).unwrap();
        let m = compute_basis_change(&bs).unwrap().matrix;
        let pre = compute_basis_change(&bs.prefix().unwrap()).unwrap().matrix;
        let n = w.len();
        let block: Vec<Vec<i64>> = m[..n - 1].iter().map(|r| r[..n - 1].to_vec()).collect();
        assert_eq!(pre, block, "{t} {w:?}");
    }
}

#[test]
fn global_cone_slices_contain_bodies() {
    let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
    let g = global_cone(&bs, 3, 2).unwrap();
    for m in [[1i64, 0], [0, 1], [1, 1], [2, 1], [1, 2]] {
        let d = DivisorClass::effective(m.to_vec());
        for k in 1..=2 {
            for nu in level_set(&bs, &d, k).unwrap() {
                let x: Vec<Q> = nu
                    .iter()
                    .map(|&v| Q::new(v.into(), k.into()))
                    .chain(m.iter().map(|&c| q(c)))
                    .collect();
                assert!(g.cone.contains_q(&x), "{x:?}");
            }
        }
    }
}

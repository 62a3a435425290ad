//! The valuation of the vertical flag.
//!
//! On the big cell `Y_i = {t_1 = ... = t_i = 0}`, so the successive orders of
//! vanishing of a section are the lexicographically smallest exponent of its
//! cell polynomial with `t_1` most significant.

use crate::poly::Poly;
use crate::sections::{Echelon, SectionBasis, SectionPoly};
use crate::{Error, Result};

pub type ValuationVector = Vec<u32>;

pub fn valuation_poly(p: &Poly) -> Result<ValuationVector> {
    p.lex_min().cloned().ok_or(Error::ZeroSection)
}

pub fn valuation(s: &SectionPoly) -> Result<ValuationVector> {
    valuation_poly(&s.poly)
}

/// Reduces a basis so that every element has its own lex-min monomial,
/// preserving the span and the torus weights.
pub fn adapted_basis(basis: &SectionBasis) -> SectionBasis {
    // Work weight space by weight space so every output section stays a
    // weight vector.
    let mut order: Vec<usize> = (0..basis.sections.len()).collect();
    order.sort_by(|&a, &b| basis.sections[a].weight.cmp(&basis.sections[b].weight));
    let mut out = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let w = &basis.sections[order[start]].weight;
        let mut end = start;
        let mut ech = Echelon::default();
        while end < order.len() && &basis.sections[order[end]].weight == w {
            ech.insert(basis.sections[order[end]].poly.clone(), end);
            end += 1;
        }
        for (_, p, _) in ech.into_sorted() {
            out.push(SectionPoly { poly: p, class: basis.class.clone(), weight: w.clone() });
        }
        start = end;
    }
    // Sections whose recorded weights are not those of their monomials can
    // still collide across weight spaces; a global pass settles that case
    // and drops the weight labels.
    let mut ech = Echelon::default();
    let mut distinct = true;
    let mut seen = std::collections::BTreeSet::new();
    for s in &out {
        if !seen.insert(s.poly.lex_min().cloned()) {
            distinct = false;
        }
    }
    if !distinct {
        for (id, s) in out.iter().enumerate() {
            ech.insert(s.poly.clone(), id);
        }
        out = ech
            .into_sorted()
            .into_iter()
            .map(|(_, p, _)| SectionPoly { weight: vec![], poly: p, class: basis.class.clone() })
            .collect();
    }
    out.sort_by(|a, b| a.poly.lex_min().cmp(&b.poly.lex_min()));
    SectionBasis { word: basis.word.clone(), class: basis.class.clone(), sections: out }
}

/// The valuation vectors of an adapted basis, sorted.
pub fn valuation_set(basis: &SectionBasis) -> Vec<ValuationVector> {
    let adapted = adapted_basis(basis);
    let mut v: Vec<ValuationVector> = adapted
        .sections
        .iter()
        .filter_map(|s| s.poly.lex_min().cloned())
        .collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::bs::BottSamelson;
    use crate::picard::DivisorClass;
    use crate::sections::{boundary_section, sections};

    #[test]
    fn lex_order_is_t1_first() {
        let mut p = Poly::monomial(vec![2, 0, 1], q(1));
        p.add_term(vec![0, 1, 0], q(1));
        assert_eq!(valuation_poly(&p).unwrap(), vec![0, 1, 0]);
        assert_eq!(valuation_poly(&Poly::one(3)).unwrap(), vec![0, 0, 0]);
        assert_eq!(valuation_poly(&Poly::zero(2)), Err(Error::ZeroSection));
    }

    #[test]
    fn boundary_section_on_p1() {
        let bs = BottSamelson::from_type("A1", &[1]).unwrap();
        assert_eq!(valuation(&boundary_section(&bs, 1).unwrap()).unwrap(), vec![1]);
    }

    #[test]
    fn triangularizes() {
        let class = DivisorClass::canonical(vec![1]);
        let mut p = Poly::one(1);
        p.add_term(vec![1], q(1));
        let basis = SectionBasis {
            word: vec![1],
            class: class.clone(),
            sections: vec![
                SectionPoly { poly: Poly::one(1), class: class.clone(), weight: vec![0] },
                SectionPoly { poly: p, class: class.clone(), weight: vec![0] },
            ],
        };
        let a = adapted_basis(&basis);
        assert_eq!(a.polys(), vec![Poly::one(1), Poly::var(1, 1)]);
    }

    #[test]
    fn a2_three_valuations() {
        let bs = BottSamelson::from_type("A2", &[1, 2]).unwrap();
        let b = sections(&bs, &DivisorClass::canonical(vec![0, 1])).unwrap();
        assert_eq!(valuation_set(&b).len(), 3);
    }
}

//! Checks of the standing assumptions: selfinjective, radical cube zero.

use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::decompose::iso_indecomposable;
use crate::rep::{injective, projective, regular};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesesReport {
    pub loewy_length: usize,
    pub radical_cube_zero: bool,
    pub selfinjective: bool,
    /// `σ` with `P_i ≅ I_σ(i)`, when every projective is injective.
    pub nakayama_permutation: Option<Vec<usize>>,
    /// Vertices whose projective is not isomorphic to any injective.
    pub non_injective_projectives: Vec<usize>,
    pub weakly_symmetric: bool,
    /// Infinite representation type is never checked, only assumed.
    pub infinite_type_checked: bool,
}

impl HypothesesReport {
    pub fn holds(&self) -> bool {
        self.radical_cube_zero && self.selfinjective
    }
}

pub fn validate_hypotheses(alg: &Algebra) -> HypothesesReport {
    let n = alg.vertex_count();
    let loewy_length = regular(alg).loewy_length();
    let injectives: Vec<_> = (0..n).map(|j| injective(alg, j)).collect();
    let mut sigma = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for i in 0..n {
        let p = projective(alg, i);
        match injectives
            .iter()
            .position(|inj| iso_indecomposable(&p, inj).is_some())
        {
            Some(j) => sigma.push(j),
            None => missing.push(i),
        }
    }
    let selfinjective = missing.is_empty();
    let weakly_symmetric = (0..n).all(|i| {
        let p = projective(alg, i);
        let soc = p.socle().0;
        soc.dim() == 1 && soc.dim_at(i) == 1
    });
    HypothesesReport {
        loewy_length,
        radical_cube_zero: loewy_length <= 3,
        selfinjective,
        nakayama_permutation: selfinjective.then_some(sigma),
        non_injective_projectives: missing,
        weakly_symmetric,
        infinite_type_checked: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};
    use crate::field::PrimeField;
    use alloc::vec;

    #[test]
    fn truncated_polynomial_ring_is_selfinjective() {
        let mut q = Quiver::new(["1"]).unwrap();
        q.add_arrow("x", 0, 0).unwrap();
        let alg = Algebra::new(PrimeField::new(3).unwrap(), q, vec![], 2).unwrap();
        let r = validate_hypotheses(&alg);
        assert!(r.holds());
        assert!(r.weakly_symmetric);
        assert_eq!(r.loewy_length, 2);
        assert_eq!(r.nakayama_permutation, Some(vec![0]));
    }

    #[test]
    fn hereditary_a2_fails() {
        let mut q = Quiver::new(["1", "2"]).unwrap();
        q.add_arrow("a", 0, 1).unwrap();
        let alg = Algebra::new(PrimeField::new(2).unwrap(), q, vec![], 2).unwrap();
        let r = validate_hypotheses(&alg);
        assert!(!r.selfinjective);
        assert!(r.radical_cube_zero);
        assert_eq!(r.non_injective_projectives, vec![1]);
        assert!(!r.holds());
    }

    #[test]
    fn radical_cube_nonzero_is_reported() {
        let q = {
            let mut q = Quiver::new(["1"]).unwrap();
            q.add_arrow("x", 0, 0).unwrap();
            q
        };
        let alg = Algebra::new(PrimeField::new(2).unwrap(), q, Vec::<Relation>::new(), 4).unwrap();
        let r = validate_hypotheses(&alg);
        assert_eq!(r.loewy_length, 4);
        assert!(!r.radical_cube_zero);
        assert!(r.selfinjective);
    }
}

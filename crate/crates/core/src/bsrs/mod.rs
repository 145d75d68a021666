//! Reed–Solomon codewords over a `K`-linear subspace `L` concatenated with
//! their recursive bivariate proximity proofs (the BS-RS code family), the
//! native and recursive covers of the family, and a detector built on them.

mod bivariate;
mod cover;
mod detect;
mod domain;
mod index;

pub use bivariate::{bivariate_extend, BivariatePoly, ExtendConstraints};
pub use cover::{native_cover, recursive_cover, CoverVertex, CoverView, RecursiveCover};
pub use detect::{bsrs_detect, BsrsCode};
pub use domain::{bsrs_domain, bsrs_prove, prove_with, BsrsDomain, BsrsNode, Row};
pub use index::BsrsIndex;

use crate::algebra::AlgebraError;
use crate::detect::DetectError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BsrsError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error("invalid BS-RS parameters: {0}")]
    Invalid(String),
    #[error("word is not of degree below {bound}")]
    NotLowDegree { bound: usize },
    #[error("more constraints than the interpolation budget {budget}")]
    OverConstrained { budget: usize },
    #[error("constraints disagree")]
    Inconsistent,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{linalg, Fe, Field, UniPoly};
    use crate::detect::{Detector, QueryPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn random_poly(f: &Field, deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
        UniPoly::new((0..deg).map(|_| f.random(rng)).collect())
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BsrsIndex::standard(4, 3, 1, 2).is_err());
        assert!(BsrsIndex::standard(4, 3, 0, 3).is_err());
        assert!(BsrsIndex::standard(4, 2, 2, 5).is_err());
        let f = Field::binary(4).unwrap();
        assert!(BsrsIndex::new(&f, 1, vec![Fe(1), Fe(1)], 1, 3).is_err());
        assert!(BsrsIndex::new(&Field::prime(17).unwrap(), 1, vec![Fe(1)], 1, 3).is_err());
    }

    #[test]
    fn domain_sizes() {
        let sizes: Vec<(usize, usize, usize)> = (1..=4)
            .map(|dim| {
                let d = bsrs_domain(&BsrsIndex::standard(6, dim, 1, 3).unwrap()).unwrap();
                (d.px_points().len(), d.len(), d.degree())
            })
            .collect();
        assert_eq!(sizes, vec![(2, 4, 1), (4, 8, 2), (8, 16, 4), (16, 80, 8)]);
        let d4 = bsrs_domain(&BsrsIndex::standard(6, 4, 1, 3).unwrap()).unwrap();
        assert_eq!(d4.l0_prime().unwrap().len(), 4);
        assert_eq!(d4.rows().len(), 4);
        assert_eq!(d4.col_child().unwrap().l().dim(), 2);
        assert!(d4.row_children().iter().all(|c| c.l().dim() == 3));
    }

    #[test]
    fn dim5_position_count_matches_recount() {
        let dom = bsrs_domain(&BsrsIndex::standard(6, 5, 1, 3).unwrap()).unwrap();
        fn recount(n: &BsrsNode) -> usize {
            let own = n.rs_len() + n.px_points().len();
            let kids: usize = n.col_child().map_or(0, |c| n.l0_prime().unwrap().len() * (recount(c) - c.rs_len()))
                + n.row_children().iter().map(|c| recount(c) - c.rs_len()).sum::<usize>();
            own + kids
        }
        assert_eq!(dom.len(), recount(&dom));
        let paths: BTreeSet<String> = (0..dom.len()).map(|p| dom.position_path(p)).collect();
        assert_eq!(paths.len(), dom.len());
        assert_eq!(dom.l0_prime().unwrap().len() + dom.l1().len(), 4 + 8);
    }

    #[test]
    fn phi_is_a_bijection_onto_the_box_domain() {
        for dim in 1..=5 {
            let dom = bsrs_domain(&BsrsIndex::standard(6, dim, 1, 3).unwrap()).unwrap();
            let mut seen = BTreeSet::new();
            for (bi, row) in dom.rows().iter().enumerate() {
                for &a in row.l_beta.elements() {
                    assert!(seen.insert(dom.phi(a, bi)));
                }
            }
            let box_len = dom.rs_len() + dom.px_points().len();
            assert_eq!(seen.len(), box_len);
        }
    }

    #[test]
    fn prove_examples_and_linearity() {
        let idx = BsrsIndex::standard(6, 4, 1, 3).unwrap();
        let dom = bsrs_domain(&idx).unwrap();
        let f = idx.field.clone();
        assert!(prove_with(&dom, &[Fe(0); 16]).unwrap().iter().all(|x| x.0 == 0));
        let ones = prove_with(&dom, &[Fe(1); 16]).unwrap();
        assert!(ones.iter().all(|&x| x == Fe(1)));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let p1 = random_poly(&f, 8, &mut rng);
            let p2 = random_poly(&f, 8, &mut rng);
            let w1 = dom.encode(&p1).unwrap();
            let w2 = dom.encode(&p2).unwrap();
            let w12 = dom.encode(&p1.add(&f, &p2)).unwrap();
            assert!(w12.iter().zip(w1.iter().zip(&w2)).all(|(s, (a, b))| *s == f.add(*a, *b)));
            assert!(dom.contains(&w1));
            let rs: Vec<Fe> = w1[..16].to_vec();
            assert_eq!(prove_with(&dom, &rs).unwrap(), w1);
        }
        let high = UniPoly::new((0..9).map(|i| if i == 8 { Fe(1) } else { Fe(0) }).collect());
        let rs: Vec<Fe> = dom.l().elements().iter().map(|&a| high.eval(&f, a)).collect();
        assert!(matches!(prove_with(&dom, &rs), Err(BsrsError::NotLowDegree { bound: 8 })));
    }

    #[test]
    fn children_restrict_to_child_codewords() {
        let idx = BsrsIndex::standard(6, 5, 1, 3).unwrap();
        let dom = bsrs_domain(&idx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = random_poly(&idx.field, dom.degree(), &mut rng);
        let w = dom.encode(&p).unwrap();
        for view in native_cover(&dom) {
            let local: Vec<Fe> = view.positions.iter().map(|&x| w[x]).collect();
            assert!(view.code.contains(&local), "{}", view.label);
        }
    }

    /// The restriction of the parent code to each view spans exactly the
    /// view code, at every vertex of the recursive cover.
    #[test]
    fn restriction_property() {
        for dim in [4, 5] {
            let idx = BsrsIndex::standard(5, dim, 1, 3).unwrap();
            let code = BsrsCode::new(&idx).unwrap();
            let f = idx.field.clone();
            let gens = code.root().generators();
            for layer in code.cover().layers() {
                for v in layer {
                    let projected: Vec<Vec<Fe>> =
                        gens.iter().map(|g| v.view.positions.iter().map(|&x| g[x]).collect()).collect();
                    assert!(linalg::same_span(&f, &projected, v.view.code.generators()), "{}", v.view.label);
                }
            }
        }
    }

    #[test]
    fn cover_shapes() {
        let base = BsrsCode::new(&BsrsIndex::standard(4, 3, 1, 3).unwrap()).unwrap();
        assert_eq!(native_cover(base.root()).len(), 1);
        assert_eq!(base.cover().depth(), 1);
        assert_eq!(base.cover().layer(1).len(), 1);
        let c5 = BsrsCode::new(&BsrsIndex::standard(6, 5, 1, 3).unwrap()).unwrap();
        assert_eq!(native_cover(c5.root()).len(), 4 + 8);
        assert_eq!(c5.cover().depth(), 1);
        assert!(c5.cover().children_cover_parents());
        assert!(c5.cover().max_disconnected_intersection() <= 1);
    }

    #[test]
    fn detect_examples() {
        let idx = BsrsIndex::standard(4, 3, 1, 3).unwrap();
        let code = BsrsCode::new(&idx).unwrap();
        let dom = code.root();
        // a row of the base case: |L_beta| - |L_0| constraints
        let row = &dom.rows()[1];
        let pts: Vec<QueryPoint> = row.l_beta.elements().iter().map(|&a| QueryPoint::Index(dom.phi(a, 1))).collect();
        let b = code.detect(&pts).unwrap();
        assert_eq!(b.rank(), row.l_beta.len() - dom.l0().len());
        // few points inside one row are unconstrained
        let b = code.detect(&pts[..dom.l0().len()]).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn forced_depth_detection_is_sound() {
        let idx = BsrsIndex::standard(6, 5, 1, 3).unwrap();
        let code = BsrsCode::new(&idx).unwrap();
        let f = idx.field.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = code.root().len();
        for _ in 0..20 {
            let mut pts = BTreeSet::new();
            while pts.len() < 6 {
                pts.insert(rng.gen_range(0..n));
            }
            let qp: Vec<QueryPoint> = pts.iter().map(|&i| QueryPoint::Index(i)).collect();
            let full = code.detect_at_depth(&qp, 0).unwrap();
            let layered = code.detect_at_depth(&qp, 1).unwrap();
            let mut joint = full.rows().to_vec();
            joint.extend(layered.rows().iter().cloned());
            assert_eq!(linalg::rank(&f, &joint), full.rank());
        }
    }

    #[test]
    fn bivariate_examples() {
        let f = Field::binary(4).unwrap();
        let g = bivariate_extend(&f, &ExtendConstraints::default(), 3, 3).unwrap();
        assert!(g.is_zero());
        let rp = UniPoly::new(vec![Fe(3), Fe(5), Fe(7)]);
        let one_row = ExtendConstraints { rows: vec![(Fe(2), rp.clone())], ..Default::default() };
        let g = bivariate_extend(&f, &one_row, 3, 1).unwrap();
        for y in f.elements() {
            assert_eq!(g.row(&f, y).padded(3), rp.coeffs);
        }
        let g = bivariate_extend(&f, &one_row, 3, 3).unwrap();
        assert_eq!(g.row(&f, Fe(2)).padded(3), rp.coeffs);
        let c = ExtendConstraints {
            columns: vec![(Fe(9), UniPoly::new(vec![Fe(1), Fe(2)]))],
            rows: vec![(Fe(4), UniPoly::new(vec![Fe(6), Fe(0), Fe(11)]))],
            points: vec![(Fe(12), Fe(13), Fe(14))],
        };
        // the row and column meet at (9, 4): make them agree there
        let at = c.rows[0].1.eval(&f, Fe(9));
        let col = UniPoly::new(vec![f.add(at, f.mul(Fe(2), Fe(4))), Fe(2)]);
        let c = ExtendConstraints { columns: vec![(Fe(9), col.clone())], ..c };
        let g = bivariate_extend(&f, &c, 3, 3).unwrap();
        assert_eq!(g.column(&f, Fe(9)).padded(3), col.padded(3));
        assert_eq!(g.row(&f, Fe(4)).padded(3), c.rows[0].1.padded(3));
        assert_eq!(g.eval(&f, Fe(12), Fe(13)), Fe(14));
        let too_many = ExtendConstraints { points: vec![(Fe(1), Fe(1), Fe(1)); 4], ..Default::default() };
        assert!(matches!(bivariate_extend(&f, &too_many, 3, 3), Err(BsrsError::OverConstrained { .. })));
    }
}

use std::collections::HashMap;

use super::{ConstraintBasis, ConstraintVector, QueryPoint};
use crate::algebra::{linalg, Field};

/// Basis of `span(w) ∩ {z : supp(z) ⊆ points}` from a spanning set `w` of
/// dual constraints.
pub fn spanning_to_basis(f: &Field, w: &[ConstraintVector], points: &[QueryPoint]) -> ConstraintBasis {
    let inside: HashMap<&QueryPoint, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut outside: HashMap<&QueryPoint, usize> = HashMap::new();
    for v in w {
        for p in v.support() {
            if !inside.contains_key(p) && !outside.contains_key(p) {
                let n = outside.len();
                outside.insert(p, n);
            }
        }
    }
    let restricted = |pos: &HashMap<&QueryPoint, usize>, v: &ConstraintVector| {
        let mut row = vec![f.zero(); pos.len()];
        for (p, z) in &v.entries {
            if let Some(&i) = pos.get(p) {
                row[i] = f.add(row[i], *z);
            }
        }
        row
    };
    let out_rows: Vec<Vec<_>> = w.iter().map(|v| restricted(&outside, v)).collect();
    let in_rows: Vec<Vec<_>> = w.iter().map(|v| restricted(&inside, v)).collect();
    let lambdas = linalg::left_nullspace(f, &out_rows, outside.len());
    let combos = lambdas
        .iter()
        .map(|lam| (0..points.len()).map(|j| f.sum(lam.iter().zip(&in_rows).map(|(&l, r)| f.mul(l, r[j])))).collect())
        .collect();
    ConstraintBasis::new(f, points.to_vec(), combos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fe;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn idx(i: usize) -> QueryPoint {
        QueryPoint::Index(i)
    }

    #[test]
    fn inside_and_outside_support() {
        let f = Field::prime(5).unwrap();
        let z = ConstraintVector::new(vec![(idx(0), Fe(1)), (idx(1), Fe(2))]);
        let b = spanning_to_basis(&f, std::slice::from_ref(&z), &[idx(0), idx(1), idx(2)]);
        assert_eq!(b.rows(), &[vec![Fe(1), Fe(2), Fe(0)]]);
        let b = spanning_to_basis(&f, &[z], &[idx(0), idx(2)]);
        assert!(b.is_empty());
    }

    #[test]
    fn matches_enumeration_of_low_rank_spans() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            // 12 vectors drawn from a rank <= 4 space over 10 positions
            let gens: Vec<Vec<Fe>> = (0..4)
                .map(|_| (0..10).map(|_| if rng.gen_bool(0.4) { f.random(&mut rng) } else { Fe(0) }).collect())
                .collect();
            let w: Vec<ConstraintVector> = (0..12)
                .map(|_| {
                    let c: Vec<Fe> = (0..4).map(|_| f.random(&mut rng)).collect();
                    ConstraintVector::new(
                        (0..10).map(|p| (idx(p), f.sum(gens.iter().zip(&c).map(|(g, &ci)| f.mul(g[p], ci))))).collect(),
                    )
                })
                .collect();
            let pts: Vec<QueryPoint> = (0..10).filter(|_| rng.gen_bool(0.6)).map(idx).collect();
            let got = spanning_to_basis(&f, &w, &pts);
            // enumerate the whole span of the generators
            let mut found = Vec::new();
            for code in 0..625usize {
                let c: Vec<Fe> = (0..4).map(|k| Fe(((code / 5usize.pow(k)) % 5) as u64)).collect();
                let v: Vec<Fe> = (0..10).map(|p| f.sum(gens.iter().zip(&c).map(|(g, &ci)| f.mul(g[p], ci)))).collect();
                let supported = (0..10).all(|p| v[p] == Fe(0) || pts.contains(&idx(p)));
                if supported {
                    found.push(
                        pts.iter()
                            .map(|q| match q {
                                QueryPoint::Index(i) => v[*i],
                                _ => unreachable!(),
                            })
                            .collect(),
                    );
                }
            }
            // the 12 samples span the generator space with overwhelming probability; check it
            let wrows: Vec<Vec<Fe>> = w
                .iter()
                .map(|v| {
                    let mut r = vec![Fe(0); 10];
                    for (p, z) in &v.entries {
                        if let QueryPoint::Index(i) = p {
                            r[*i] = *z;
                        }
                    }
                    r
                })
                .collect();
            if linalg::rank(&f, &wrows) != linalg::rank(&f, &gens) {
                continue;
            }
            assert!(linalg::same_span(&f, got.rows(), &found));
        }
    }
}

use super::{check_distinct, ConstraintBasis, DetectError, Detector, QueryPoint};
use crate::algebra::{linalg, Fe, Field};

/// Gaussian-elimination detector: constraints on the positions `points` that
/// annihilate every generator word.
pub fn brute_force_detect(f: &Field, generators: &[Vec<Fe>], points: &[usize]) -> Result<ConstraintBasis, DetectError> {
    let len = generators.first().map_or(0, Vec::len);
    if generators.iter().any(|g| g.len() != len) {
        return Err(DetectError::Shape("generators differ in length".into()));
    }
    if let Some(&bad) = points.iter().find(|&&i| i >= len && !generators.is_empty()) {
        return Err(DetectError::InvalidPoint(format!("#{bad} outside a domain of size {len}")));
    }
    let qp: Vec<QueryPoint> = points.iter().map(|&i| QueryPoint::Index(i)).collect();
    check_distinct(&qp)?;
    let restricted: Vec<Vec<Fe>> = generators.iter().map(|g| points.iter().map(|&i| g[i]).collect()).collect();
    let rows = linalg::nullspace(f, &restricted, points.len());
    Ok(ConstraintBasis::new(f, qp, rows))
}

/// A code given by generator words over the positions `0..len`.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    generators: Vec<Vec<Fe>>,
    len: usize,
}

impl LinearCode {
    pub fn new(field: &Field, generators: Vec<Vec<Fe>>) -> Result<Self, DetectError> {
        let len = generators.first().map_or(0, Vec::len);
        if generators.iter().any(|g| g.len() != len) {
            return Err(DetectError::Shape("generators differ in length".into()));
        }
        Ok(LinearCode { field: field.clone(), generators, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn generators(&self) -> &[Vec<Fe>] {
        &self.generators
    }

    /// `sum_j msg_j g_j`.
    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        (0..self.len).map(|i| f.sum(self.generators.iter().zip(msg).map(|(g, &c)| f.mul(g[i], c)))).collect()
    }

    /// Every codeword, in lexicographic order of messages (small codes only).
    pub fn codewords(&self) -> Vec<Vec<Fe>> {
        let q = self.field.order() as usize;
        let k = self.generators.len();
        let total = q.pow(k as u32);
        let mut seen = std::collections::BTreeSet::new();
        for idx in 0..total {
            let mut x = idx;
            let msg: Vec<Fe> = (0..k)
                .map(|_| {
                    let c = Fe((x % q) as u64);
                    x /= q;
                    c
                })
                .collect();
            seen.insert(self.encode(&msg));
        }
        seen.into_iter().collect()
    }

    fn index_points(points: &[QueryPoint]) -> Result<Vec<usize>, DetectError> {
        points
            .iter()
            .map(|p| match p {
                QueryPoint::Index(i) => Ok(*i),
                other => Err(DetectError::InvalidPoint(other.to_string())),
            })
            .collect()
    }
}

impl Detector for LinearCode {
    fn field(&self) -> &Field {
        &self.field
    }

    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        let idx = Self::index_points(points)?;
        brute_force_detect(&self.field, &self.generators, &idx)
    }

    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        match q {
            QueryPoint::Index(i) if *i < self.len => Some(self.generators.iter().map(|g| g[*i]).collect()),
            _ => None,
        }
    }

    fn code_dim(&self) -> Option<usize> {
        Some(linalg::rank(&self.field, &self.generators))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rs_generators(f: &Field, xs: &[u64], k: usize) -> Vec<Vec<Fe>> {
        (0..k).map(|j| xs.iter().map(|&x| f.pow(Fe(x), j as u64)).collect()).collect()
    }

    #[test]
    fn rs_second_difference() {
        let f = Field::prime(5).unwrap();
        let g = rs_generators(&f, &[0, 1, 2, 3], 2);
        let b = brute_force_detect(&f, &g, &[0, 1, 2]).unwrap();
        assert_eq!(b.rows(), &[vec![Fe(1), Fe(3), Fe(1)]]);
        let b = brute_force_detect(&f, &g, &[0, 1]).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn random_code_rank_nullity() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g: Vec<Vec<Fe>> = (0..4).map(|_| (0..8).map(|_| f.random(&mut rng)).collect()).collect();
            let mut pts: Vec<usize> = (0..8).collect();
            rand::seq::SliceRandom::shuffle(pts.as_mut_slice(), &mut rng);
            pts.truncate(5);
            let b = brute_force_detect(&f, &g, &pts).unwrap();
            // independent rank: transpose the restricted generator matrix
            let cols: Vec<Vec<Fe>> = pts.iter().map(|&i| g.iter().map(|r| r[i]).collect()).collect();
            assert_eq!(b.rank(), 5 - linalg::rank(&f, &cols));
            for gen in &g {
                assert!(b.annihilates(&f, |p| match p {
                    QueryPoint::Index(i) => gen[*i],
                    _ => unreachable!(),
                }));
            }
        }
    }

    #[test]
    fn rejects_bad_points() {
        let f = Field::prime(5).unwrap();
        let g = rs_generators(&f, &[0, 1, 2], 1);
        assert!(brute_force_detect(&f, &g, &[3]).is_err());
        assert!(brute_force_detect(&f, &g, &[1, 1]).is_err());
    }
}

use super::{check_distinct, ConstraintBasis, DetectError, Detector, QueryPoint};
use crate::algebra::{linalg, power_sums, powers, Fe, Field};

/// Largest `d^m` for which [`SrmCode`] exposes dense expansions.
pub const EXPANSION_CAP: usize = 1 << 14;

/// A product `prod_i Q_i(X_i)` of univariate factors, each given by exactly
/// `d` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPoly {
    pub factors: Vec<Vec<Fe>>,
}

impl ProductPoly {
    pub fn num_vars(&self) -> usize {
        self.factors.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.factors.first().map_or(0, Vec::len)
    }

    /// Dense coefficient vector; `X^e` sits at `sum_i e_i d^i`.
    pub fn expand(&self, f: &Field) -> Vec<Fe> {
        let mut out = vec![f.one()];
        for factor in &self.factors {
            let mut next = Vec::with_capacity(out.len() * factor.len());
            for &c in factor {
                next.extend(out.iter().map(|&x| f.mul(x, c)));
            }
            out = next;
        }
        out
    }

    fn tail(&self) -> ProductPoly {
        ProductPoly { factors: self.factors[1..].to_vec() }
    }
}

/// Basis (reduced row-echelon) of `{ a : sum_k a_k Q_k = 0 }` as formal
/// polynomials, by recursion on the number of variables.
pub fn nullspace_product_univariates(f: &Field, polys: &[ProductPoly]) -> Result<Vec<Vec<Fe>>, DetectError> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let (m, d) = (first.num_vars(), first.degree_bound());
    if polys.iter().any(|p| p.num_vars() != m || p.factors.iter().any(|q| q.len() != d)) {
        return Err(DetectError::Shape("product polynomials disagree on (m, d)".into()));
    }
    if m == 0 {
        // Every polynomial is the constant 1.
        let ones = vec![polys.iter().map(|_| f.one()).collect::<Vec<_>>()];
        return Ok(linalg::nullspace(f, &ones, polys.len()));
    }
    Ok(solve_recursive(f, polys, d))
}

fn solve_recursive(f: &Field, polys: &[ProductPoly], d: usize) -> Vec<Vec<Fe>> {
    let l = polys.len();
    if polys[0].num_vars() == 1 {
        let coeffs: Vec<Vec<Fe>> = polys.iter().map(|p| p.factors[0].clone()).collect();
        return linalg::left_nullspace(f, &coeffs, d);
    }
    let tails: Vec<ProductPoly> = polys.iter().map(ProductPoly::tail).collect();
    let b = solve_recursive(f, &tails, d);
    let r = b.len();
    // Unknowns: a (l entries) then v_j (r entries each, j < d).
    // For every j and k: a_k c_{k,j} - sum_s v_{j,s} b_s[k] = 0.
    let ncols = l + d * r;
    let mut system = Vec::with_capacity(d * l);
    for j in 0..d {
        for k in 0..l {
            let mut row = vec![f.zero(); ncols];
            row[k] = polys[k].factors[0][j];
            for (s, bs) in b.iter().enumerate() {
                row[l + j * r + s] = f.neg(bs[k]);
            }
            system.push(row);
        }
    }
    let mut projected: Vec<Vec<Fe>> =
        linalg::nullspace(f, &system, ncols).into_iter().map(|v| v[..l].to_vec()).collect();
    linalg::rref(f, &mut projected);
    projected
}

/// The code of all partial-sum tables `w_Q(a) = sum_{g in H^{m-|a|}} Q(a, g)`
/// for `Q` of individual degree `< d` in `m` variables.
#[derive(Clone, Debug)]
pub struct SrmCode {
    field: Field,
    m: usize,
    d: usize,
    h: Vec<Fe>,
    sums: Vec<Fe>,
}

impl SrmCode {
    pub fn new(field: &Field, m: usize, d: usize, h: Vec<Fe>) -> Result<Self, DetectError> {
        if d as u64 > field.order() {
            return Err(DetectError::DegreeExceedsField { d, q: field.order() });
        }
        if m * d == 0 {
            return Err(DetectError::Shape("m*d must be at least 1".into()));
        }
        let hp: Vec<QueryPoint> = h.iter().map(|&x| QueryPoint::Tuple(vec![x])).collect();
        check_distinct(&hp)?;
        if let Some(bad) = h.iter().find(|x| x.0 >= field.order()) {
            return Err(DetectError::InvalidPoint(format!("{} is not a field element", bad.0)));
        }
        let sums = power_sums(field, &h, d);
        Ok(SrmCode { field: field.clone(), m, d, h, sums })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h(&self) -> &[Fe] {
        &self.h
    }

    /// `Phi_q`: the product polynomial whose coefficients weight each monomial
    /// of `Q` in `w_Q(q)`.
    pub fn phi(&self, q: &[Fe]) -> Result<ProductPoly, DetectError> {
        if q.len() > self.m {
            return Err(DetectError::InvalidPoint(format!("tuple of length {} > m = {}", q.len(), self.m)));
        }
        let f = &self.field;
        let factors =
            (0..self.m).map(|i| if i < q.len() { powers(f, q[i], self.d) } else { self.sums.clone() }).collect();
        Ok(ProductPoly { factors })
    }

    fn tuple<'a>(&self, p: &'a QueryPoint) -> Result<&'a [Fe], DetectError> {
        match p {
            QueryPoint::Tuple(t) if t.len() <= self.m => Ok(t),
            other => Err(DetectError::InvalidPoint(other.to_string())),
        }
    }
}

impl Detector for SrmCode {
    fn field(&self) -> &Field {
        &self.field
    }

    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        check_distinct(points)?;
        let polys = points.iter().map(|p| self.tuple(p).and_then(|t| self.phi(t))).collect::<Result<Vec<_>, _>>()?;
        let rows = nullspace_product_univariates(&self.field, &polys)?;
        Ok(ConstraintBasis::new(&self.field, points.to_vec(), rows))
    }

    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        self.code_dim()?;
        let t = self.tuple(q).ok()?;
        Some(self.phi(t).ok()?.expand(&self.field))
    }

    fn code_dim(&self) -> Option<usize> {
        self.d.checked_pow(self.m as u32).filter(|&n| n <= EXPANSION_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exponents, DenseMultiPoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fe(xs: &[u64]) -> Vec<Fe> {
        xs.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn phi_examples() {
        let f = Field::prime(5).unwrap();
        let c = SrmCode::new(&f, 1, 2, fe(&[0, 1])).unwrap();
        assert_eq!(c.phi(&[Fe(3)]).unwrap().factors, vec![fe(&[1, 3])]);
        assert_eq!(c.phi(&[]).unwrap().factors, vec![fe(&[2, 1])]);
        assert!(matches!(SrmCode::new(&f, 1, 6, fe(&[0, 1])), Err(DetectError::DegreeExceedsField { d: 6, q: 5 })));
    }

    #[test]
    fn phi_expansion_matches_partial_sum_weights() {
        let f = Field::prime(5).unwrap();
        let h = fe(&[0, 1]);
        let c = SrmCode::new(&f, 2, 2, h.clone()).unwrap();
        let phi = c.phi(&[Fe(3)]).unwrap().expand(&f);
        let direct: Vec<Fe> = (0..4)
            .map(|idx| {
                let e = exponents(idx, 2, 2);
                let a = f.pow(Fe(3), u64::from(e[0]));
                f.mul(a, f.sum(h.iter().map(|&g| f.pow(g, u64::from(e[1])))))
            })
            .collect();
        assert_eq!(phi, direct);
    }

    #[test]
    fn nullspace_examples() {
        let f = Field::prime(5).unwrap();
        let q1 = ProductPoly { factors: vec![fe(&[1, 1]), fe(&[1, 1])] };
        let q2 = ProductPoly { factors: vec![fe(&[2, 2]), fe(&[1, 1])] };
        let b = nullspace_product_univariates(&f, &[q1, q2]).unwrap();
        assert_eq!(b, vec![fe(&[1, 2])]);
        assert!(linalg::same_span(&f, &b, &[fe(&[2, 4])]));
        let one = ProductPoly { factors: vec![fe(&[1, 0])] };
        let x = ProductPoly { factors: vec![fe(&[0, 1])] };
        assert!(nullspace_product_univariates(&f, &[one, x]).unwrap().is_empty());
        assert!(nullspace_product_univariates(&f, &[]).unwrap().is_empty());
    }

    #[test]
    fn nullspace_matches_expansion_and_rank_nullity() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..40 {
            let l = 6 + trial % 5;
            let polys: Vec<ProductPoly> = (0..l)
                .map(|k| ProductPoly {
                    factors: (0..3)
                        .map(|_| {
                            // sparse, repeated factors make nontrivial kernels likely
                            (0..3).map(|_| if rng.gen_bool(0.5) { Fe(0) } else { Fe(1 + (k as u64 % 3)) }).collect()
                        })
                        .collect(),
                })
                .collect();
            let got = nullspace_product_univariates(&f, &polys).unwrap();
            let expanded: Vec<Vec<Fe>> = polys.iter().map(|p| p.expand(&f)).collect();
            let want = linalg::left_nullspace(&f, &expanded, 27);
            assert_eq!(got, want);
            assert_eq!(got.len() + linalg::rank(&f, &expanded), l);
        }
    }

    #[test]
    fn detect_examples() {
        let f = Field::prime(5).unwrap();
        let c = SrmCode::new(&f, 2, 2, fe(&[0, 1])).unwrap();
        let pts = vec![QueryPoint::Tuple(fe(&[3])), QueryPoint::Tuple(fe(&[3, 0])), QueryPoint::Tuple(fe(&[3, 1]))];
        let b = c.detect(&pts).unwrap();
        assert_eq!(b.rows(), &[fe(&[1, 4, 4])]);
        let c1 = SrmCode::new(&f, 1, 2, fe(&[0, 1])).unwrap();
        let line = vec![QueryPoint::Tuple(fe(&[2])), QueryPoint::Tuple(fe(&[4]))];
        assert!(c1.detect(&line).unwrap().is_empty());
    }

    #[test]
    fn detect_is_deterministic_and_sound() {
        let f = Field::prime(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c = SrmCode::new(&f, 2, 3, fe(&[0, 1])).unwrap();
        for _ in 0..20 {
            let mut pts = Vec::new();
            while pts.len() < 8 {
                let len = rng.gen_range(0..=2);
                let p = QueryPoint::Tuple((0..len).map(|_| f.random(&mut rng)).collect());
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            let b = c.detect(&pts).unwrap();
            assert_eq!(b, c.detect(&pts).unwrap());
            let q = DenseMultiPoly::new(2, 3, (0..9).map(|_| f.random(&mut rng)).collect());
            assert!(b.annihilates(&f, |p| match p {
                QueryPoint::Tuple(t) => q.partial_sum(&f, t, c.h()),
                _ => unreachable!(),
            }));
        }
    }
}

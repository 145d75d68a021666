use std::collections::HashMap;

use super::field::{Fe, Field};
use super::poly::UniPoly;
use super::AlgebraError;

/// A `K`-linear subspace of a binary field `F`, `K = F_{2^s}`, with its basis
/// kept in the given order.
///
/// Element `i` of the enumeration is `sum_j k[c_j] * b_j` where `c_j` is the
/// `j`-th base-`|K|` digit of `i` (least significant first) and `k` lists `K`
/// ascending.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    k: Vec<Fe>,
    basis: Vec<Fe>,
    elems: Vec<Fe>,
    index: HashMap<Fe, usize>,
}

impl Subspace {
    pub fn span(field: &Field, s: u32, basis: Vec<Fe>) -> Result<Subspace, AlgebraError> {
        let k = field.subfield(s)?;
        Subspace::span_over(field, k, basis)
    }

    /// Span over an explicit list of subfield elements (ascending).
    pub fn span_over(field: &Field, k: Vec<Fe>, basis: Vec<Fe>) -> Result<Subspace, AlgebraError> {
        let q = k.len();
        let size = q
            .checked_pow(basis.len() as u32)
            .filter(|&n| n as u64 <= field.order())
            .ok_or(AlgebraError::DependentBasis)?;
        let mut elems = vec![field.zero(); size];
        let mut stride = 1;
        for &b in &basis {
            // elems[c * stride + r] = k[c] * b + elems[r]
            for c in 1..q {
                let kb = field.mul(k[c], b);
                for r in 0..stride {
                    elems[c * stride + r] = field.add(kb, elems[r]);
                }
            }
            stride *= q;
        }
        let mut index = HashMap::with_capacity(size);
        for (i, &x) in elems.iter().enumerate() {
            if index.insert(x, i).is_some() {
                return Err(AlgebraError::DependentBasis);
            }
        }
        Ok(Subspace { field: field.clone(), k, basis, elems, index })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn subfield(&self) -> &[Fe] {
        &self.k
    }

    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Fe] {
        &self.elems
    }

    pub fn contains(&self, x: Fe) -> bool {
        self.index.contains_key(&x)
    }

    pub fn index_of(&self, x: Fe) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn vanishing_poly(&self) -> VanishingPoly {
        VanishingPoly::of_set(&self.field, &self.elems)
    }
}

/// `Z_S(X) = prod_{a in S} (X - a)` kept in coefficient form together with
/// its nonzero terms for fast evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingPoly {
    poly: UniPoly,
    terms: Vec<(u64, Fe)>,
}

impl VanishingPoly {
    pub fn of_set(f: &Field, set: &[Fe]) -> VanishingPoly {
        let mut coeffs = vec![f.one()];
        for &a in set {
            let mut next = vec![f.zero(); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], c);
                next[i] = f.sub(next[i], f.mul(c, a));
            }
            coeffs = next;
        }
        let terms = coeffs.iter().enumerate().filter(|(_, c)| c.0 != 0).map(|(i, &c)| (i as u64, c)).collect();
        VanishingPoly { poly: UniPoly::new(coeffs), terms }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.coeffs.len() - 1
    }

    /// Exponents carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn eval(&self, f: &Field, x: Fe) -> Fe {
        f.sum(self.terms.iter().map(|&(e, c)| f.mul(c, f.pow(x, e))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn span_examples() {
        let f = Field::binary(4).unwrap();
        let s = Subspace::span(&f, 1, vec![Fe(1)]).unwrap();
        assert_eq!(s.elements(), &[Fe(0), Fe(1)]);
        let s = Subspace::span(&f, 1, vec![Fe(1), Fe(2)]).unwrap();
        assert_eq!(s.elements(), &[Fe(0), Fe(1), Fe(2), Fe(3)]);
        assert!(matches!(Subspace::span(&f, 1, vec![Fe(1), Fe(1)]), Err(AlgebraError::DependentBasis)));
        // over F_4 inside F_16 the span of {1} is F_4 itself
        let s = Subspace::span(&f, 2, vec![Fe(1)]).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.elements().iter().all(|&x| f.mul(f.mul(x, x), f.mul(x, x)) == x));
    }

    #[test]
    fn vanishing_examples() {
        let f = Field::binary(4).unwrap();
        let z = VanishingPoly::of_set(&f, &[Fe(0)]);
        assert_eq!(z.poly().coeffs, vec![Fe(0), Fe(1)]);
        let z = VanishingPoly::of_set(&f, &[Fe(0), Fe(1)]);
        assert_eq!(z.poly().coeffs, vec![Fe(0), Fe(1), Fe(1)]);
    }

    #[test]
    fn random_dim3_vanishing_is_linearized() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Field::binary(8).unwrap();
        let mut found = 0;
        while found < 20 {
            let basis: Vec<Fe> = (0..3).map(|_| f.random(&mut rng)).collect();
            let Ok(s) = Subspace::span(&f, 1, basis) else { continue };
            found += 1;
            let z = s.vanishing_poly();
            assert_eq!(z.degree(), 8);
            assert!(z.support().iter().all(|e| [1, 2, 4, 8].contains(e)));
            for &a in s.elements() {
                assert_eq!(z.eval(&f, a), Fe(0));
            }
            let roots = f.elements().filter(|&x| z.eval(&f, x) == Fe(0)).count();
            assert_eq!(roots, 8);
        }
    }

    #[test]
    fn vanishing_map_is_additive_exhaustive() {
        let f = Field::binary(8).unwrap();
        let s = Subspace::span(&f, 1, vec![Fe(3), Fe(17), Fe(200)]).unwrap();
        let z = s.vanishing_poly();
        let table: Vec<Fe> = f.elements().map(|x| z.eval(&f, x)).collect();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(table[f.add(a, b).0 as usize], f.add(table[a.0 as usize], table[b.0 as usize]));
            }
        }
    }
}

use crate::algebra::{Fe, Field, Subspace};

use super::BsrsError;

/// Parameters `(K, F, L, mu, k)` of a BS-RS code, with `K = F_{2^s}` and the
/// basis of `L` kept in the given order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsrsIndex {
    pub field: Field,
    pub s: u32,
    pub basis: Vec<Fe>,
    pub mu: usize,
    pub k: usize,
}

impl BsrsIndex {
    pub fn new(field: &Field, s: u32, basis: Vec<Fe>, mu: usize, k: usize) -> Result<Self, BsrsError> {
        let idx = BsrsIndex { field: field.clone(), s, basis, mu, k };
        idx.validate()?;
        Ok(idx)
    }

    /// `L = span(1, x, ..., x^{dim-1})` over `F_2` inside `F_{2^e}`.
    pub fn standard(e: u32, dim: usize, mu: usize, k: usize) -> Result<Self, BsrsError> {
        let field = Field::binary(e)?;
        let basis = (0..dim).map(|i| Fe(1 << i)).collect();
        BsrsIndex::new(&field, 1, basis, mu, k)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `|K|`.
    pub fn subfield_order(&self) -> u64 {
        1 << self.s
    }

    /// `|L| * |K|^{-mu}`, the number of message coefficients.
    pub fn degree(&self) -> usize {
        let q = self.subfield_order() as usize;
        q.pow((self.dim() - self.mu.min(self.dim())) as u32)
    }

    pub fn subspace(&self) -> Result<Subspace, BsrsError> {
        Ok(Subspace::span(&self.field, self.s, self.basis.clone())?)
    }

    fn validate(&self) -> Result<(), BsrsError> {
        if !self.field.is_binary() {
            return Err(BsrsError::Invalid("BS-RS needs a binary field".into()));
        }
        self.field.subfield(self.s)?;
        if self.mu == 0 {
            return Err(BsrsError::Invalid("mu must be positive".into()));
        }
        if self.k <= 2 * self.mu {
            return Err(BsrsError::Invalid(format!("k = {} must exceed 2*mu = {}", self.k, 2 * self.mu)));
        }
        if self.basis.is_empty() {
            return Err(BsrsError::Invalid("dim L must be at least 1".into()));
        }
        self.subspace()?;
        check_dims(self.dim(), self.mu, self.k)
    }
}

/// Every node of the recursion must have `mu <= ceil(dim / 2)`.
fn check_dims(dim: usize, mu: usize, k: usize) -> Result<(), BsrsError> {
    if mu > dim.div_ceil(2) {
        return Err(BsrsError::Invalid(format!("mu = {mu} exceeds ceil(dim/2) for a subspace of dimension {dim}")));
    }
    if dim > k {
        let h = dim / 2;
        check_dims(dim - h, mu, k)?;
        check_dims(h + mu, mu, k)?;
    }
    Ok(())
}

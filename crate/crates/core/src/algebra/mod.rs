//! Finite fields, subspaces, vanishing polynomials, univariate and
//! multivariate polynomials, and dense linear algebra.

mod field;
pub mod linalg;
mod poly;
mod subspace;

pub use field::{gf2_is_irreducible, is_prime, Fe, Field, FieldKind, BINARY_MODULI};
pub use poly::{exponents, power_sums, powers, DenseMultiPoly, MultiPoly, UniPoly};
pub use subspace::{Subspace, VanishingPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("polynomial {0:#x} is reducible over F_2")]
    Reducible(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("parameter too large: {0}")]
    TooLarge(String),
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("{field} has no subfield of order 2^{s}")]
    NotSubfield { field: String, s: u32 },
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateX(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent exceeds individual degree bound {bound}")]
    DegreeBound { bound: usize },
    #[error("cannot parse field element or field: {0}")]
    Parse(String),
}

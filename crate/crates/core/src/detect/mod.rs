//! Constraint detection for linear codes.
//!
//! A detector for a code `C` takes a set of domain points `I` and returns a
//! basis of the dual constraints supported on `I`: every `z` with
//! `sum_{i in I} z_i w_i = 0` for all `w in C`. The conditional sampler in
//! [`sampler`] turns any detector into a lazy uniform codeword.

mod brute;
mod sampler;
mod spanning;
mod srm;

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{linalg, AlgebraError, Fe, Field};
use crate::protocol::CoinError;

pub use brute::{brute_force_detect, LinearCode};
pub use sampler::{sample_conditional, AnswerTable, SamplerSession};
pub use spanning::spanning_to_basis;
pub use srm::{nullspace_product_univariates, ProductPoly, SrmCode, EXPANSION_CAP};

/// A point of a code domain: a tuple over the field (sumcheck codes, where the
/// empty tuple is the full sum) or a plain position index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QueryPoint {
    Tuple(Vec<Fe>),
    Index(usize),
}

impl QueryPoint {
    /// The empty tuple.
    pub fn bottom() -> Self {
        QueryPoint::Tuple(Vec::new())
    }

    pub fn format(&self, f: &Field) -> String {
        match self {
            QueryPoint::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(|&x| f.format(x)).collect();
                format!("({})", parts.join(","))
            }
            QueryPoint::Index(i) => format!("#{i}"),
        }
    }

    pub fn to_json(&self, f: &Field) -> Value {
        match self {
            QueryPoint::Tuple(t) => Value::Array(t.iter().map(|&x| json!(f.format(x))).collect()),
            QueryPoint::Index(i) => json!(i),
        }
    }

    /// Inverse of [`QueryPoint::to_json`].
    pub fn from_json(f: &Field, v: &Value) -> Result<Self, DetectError> {
        match v {
            Value::Array(items) => items
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(f.parse(s)?),
                    Value::Number(n) => n
                        .as_u64()
                        .filter(|&n| n < f.order())
                        .map(Fe)
                        .ok_or_else(|| DetectError::InvalidPoint(x.to_string())),
                    _ => Err(DetectError::InvalidPoint(x.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(QueryPoint::Tuple),
            Value::Number(n) => n
                .as_u64()
                .map(|i| QueryPoint::Index(i as usize))
                .ok_or_else(|| DetectError::InvalidPoint(v.to_string())),
            _ => Err(DetectError::InvalidPoint(v.to_string())),
        }
    }
}

impl fmt::Display for QueryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryPoint::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(|x| x.0.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            QueryPoint::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Coins(#[from] CoinError),
    #[error("degree bound {d} exceeds field size {q}")]
    DegreeExceedsField { d: usize, q: u64 },
    #[error("invalid query point {0}")]
    InvalidPoint(String),
    #[error("query point {0} appears twice")]
    DuplicatePoint(String),
    #[error("answer table violates a code constraint")]
    Contradiction,
    #[error("inconsistent shapes: {0}")]
    Shape(String),
}

/// A dual constraint, stored sparsely without zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintVector {
    pub entries: Vec<(QueryPoint, Fe)>,
}

impl ConstraintVector {
    pub fn new(entries: Vec<(QueryPoint, Fe)>) -> Self {
        ConstraintVector { entries: entries.into_iter().filter(|e| e.1 .0 != 0).collect() }
    }

    pub fn support(&self) -> impl Iterator<Item = &QueryPoint> {
        self.entries.iter().map(|e| &e.0)
    }

    /// `sum_p z(p) w(p)`.
    pub fn apply(&self, f: &Field, mut w: impl FnMut(&QueryPoint) -> Fe) -> Fe {
        f.sum(self.entries.iter().map(|(p, z)| f.mul(*z, w(p))))
    }
}

/// A basis of constraints over an ordered point set `I`, kept in reduced
/// row-echelon form with respect to that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintBasis {
    points: Vec<QueryPoint>,
    rows: Vec<Vec<Fe>>,
}

impl ConstraintBasis {
    /// Canonicalises `rows` (dense over `points`).
    pub fn new(f: &Field, points: Vec<QueryPoint>, mut rows: Vec<Vec<Fe>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == points.len()));
        linalg::rref(f, &mut rows);
        ConstraintBasis { points, rows }
    }

    pub fn empty(points: Vec<QueryPoint>) -> Self {
        ConstraintBasis { points, rows: Vec::new() }
    }

    pub fn points(&self) -> &[QueryPoint] {
        &self.points
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn vectors(&self) -> Vec<ConstraintVector> {
        self.rows
            .iter()
            .map(|r| ConstraintVector::new(self.points.iter().cloned().zip(r.iter().copied()).collect()))
            .collect()
    }

    /// Whether both bases span the same space; `other` may list the same
    /// points in a different order.
    pub fn same_span(&self, f: &Field, other: &ConstraintBasis) -> bool {
        if self.points.len() != other.points.len() {
            return false;
        }
        let pos: HashMap<&QueryPoint, usize> = self.points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut perm = Vec::with_capacity(other.points.len());
        for p in &other.points {
            match pos.get(p) {
                Some(&i) => perm.push(i),
                None => return false,
            }
        }
        let reordered: Vec<Vec<Fe>> = other
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![f.zero(); r.len()];
                for (j, &x) in r.iter().enumerate() {
                    v[perm[j]] = x;
                }
                v
            })
            .collect();
        linalg::same_span(f, &self.rows, &reordered)
    }

    /// Whether every basis vector vanishes on the word `w`.
    pub fn annihilates(&self, f: &Field, w: impl Fn(&QueryPoint) -> Fe) -> bool {
        let vals: Vec<Fe> = self.points.iter().map(&w).collect();
        self.rows.iter().all(|r| f.dot(r, &vals).0 == 0)
    }

    pub fn to_json(&self, f: &Field) -> Value {
        json!({
            "points": self.points.iter().map(|p| p.to_json(f)).collect::<Vec<_>>(),
            "basis": self.vectors().iter().map(|v| {
                v.entries.iter().map(|(p, z)| json!({"point": p.to_json(f), "value": f.format(*z)}))
                    .collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

/// A constraint detector for a fixed linear code over [`Detector::field`].
pub trait Detector {
    fn field(&self) -> &Field;

    /// Basis of the dual constraints supported on `points`.
    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError>;

    /// Optional linear description of the code: a vector `phi_q` with
    /// `w(q) = <phi_q, m>` where `m` ranges over messages of length
    /// [`Detector::code_dim`]. When present, [`SamplerSession`] reduces new
    /// points against its table by elimination instead of calling the
    /// detector.
    fn expansion(&self, _q: &QueryPoint) -> Option<Vec<Fe>> {
        None
    }

    fn code_dim(&self) -> Option<usize> {
        None
    }
}

impl<D: Detector + ?Sized> Detector for &D {
    fn field(&self) -> &Field {
        (**self).field()
    }
    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        (**self).detect(points)
    }
    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        (**self).expansion(q)
    }
    fn code_dim(&self) -> Option<usize> {
        (**self).code_dim()
    }
}

impl<D: Detector + ?Sized> Detector for std::sync::Arc<D> {
    fn field(&self) -> &Field {
        (**self).field()
    }
    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        (**self).detect(points)
    }
    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        (**self).expansion(q)
    }
    fn code_dim(&self) -> Option<usize> {
        (**self).code_dim()
    }
}

pub(crate) fn check_distinct(points: &[QueryPoint]) -> Result<(), DetectError> {
    let mut seen = std::collections::HashSet::with_capacity(points.len());
    for p in points {
        if !seen.insert(p) {
            return Err(DetectError::DuplicatePoint(p.to_string()));
        }
    }
    Ok(())
}

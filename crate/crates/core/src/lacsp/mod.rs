//! Linear-algebraic constraint satisfaction problems.
//!
//! An instance fixes two Reed–Solomon codes `C0`, `C1` of block length `l`
//! over a common evaluation domain and a `q`-local map `g`; a witness is a
//! pair `(w0, w1)` with `w0 in C0`, `w1 in C1` and `g(w0) = w1`. The
//! [`LacspVerifier`] tests proximity of both words and checks
//! `g(w0)[j] = w1[j]` at a random `j`. In the randomizable variant the
//! prover first shifts `w0` by a uniform element of a `t`-wise independent
//! subcode `C'`, so that the [`RlacspSimulator`] can answer up to `t / q`
//! witness queries with fresh uniform values.

mod iop;
mod map;

use std::sync::Arc;

use serde_json::json;

pub use iop::{
    audit_exact_rlacsp, run_lacsp, run_rlacsp_real, run_rlacsp_simulated, LacspProver, LacspVerifier, RlacspMalicious,
    RlacspProver, RlacspSimRun, RlacspSimulator, RlacspStrategy, ORACLE_W0, ORACLE_W1, TESTER_REPS,
};
pub use map::{apply_map, evasiveness, locality_violations, IdentityMap, LocalMap, PairMap};

use crate::algebra::{Fe, Field, UniPoly};
use crate::protocol::{Coins, Namespace, ProtocolError};
use crate::sumcheck::field_label;

/// A Reed–Solomon code `{ (p(x))_{x in domain} : deg p < degree }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsCode {
    pub field: Field,
    pub domain: Vec<Fe>,
    pub degree: usize,
}

impl RsCode {
    pub fn new(field: &Field, domain: Vec<Fe>, degree: usize) -> Result<Self, ProtocolError> {
        let mut sorted = domain.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != domain.len() || domain.iter().any(|x| x.0 >= field.order()) {
            return Err(ProtocolError::Invalid("evaluation domain must be a set of field elements".into()));
        }
        if degree == 0 || degree > domain.len() {
            return Err(ProtocolError::Invalid(format!("degree {degree} outside 1..={}", domain.len())));
        }
        Ok(RsCode { field: field.clone(), domain, degree })
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn encode(&self, msg: &[Fe]) -> Vec<Fe> {
        let p = UniPoly::new(msg.to_vec());
        self.domain.iter().map(|&x| p.eval(&self.field, x)).collect()
    }

    /// Evaluations of `1, X, ..., X^{degree-1}`.
    pub fn generators(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        (0..self.degree).map(|j| self.domain.iter().map(|&x| f.pow(x, j as u64)).collect()).collect()
    }

    pub fn contains(&self, w: &[Fe]) -> bool {
        if w.len() != self.len() {
            return false;
        }
        let pts: Vec<(Fe, Fe)> = self.domain.iter().copied().zip(w.iter().copied()).collect();
        crate::masking::fits_degree(&self.field, &pts, self.degree).unwrap_or(false)
    }

    pub fn random(&self, coins: &mut dyn Coins, ns: Namespace) -> Result<Vec<Fe>, ProtocolError> {
        let msg = (0..self.degree).map(|_| coins.draw_fe(ns, &self.field)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.encode(&msg))
    }

    /// Minimum distance `l - degree + 1`.
    pub fn min_distance(&self) -> usize {
        self.len() - self.degree + 1
    }
}

/// An LACSP instance with Reed–Solomon codes.
#[derive(Clone)]
pub struct LacspInstance {
    pub c0: RsCode,
    pub c1: RsCode,
    pub g: Arc<dyn LocalMap>,
    /// Minimum distance of `C1 ∪ g(C0)`, so `tau = min_distance / l`.
    pub min_distance: usize,
}

impl std::fmt::Debug for LacspInstance {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("LacspInstance")
            .field("c0", &self.c0)
            .field("c1", &self.c1)
            .field("g", &self.g.name())
            .field("min_distance", &self.min_distance)
            .finish()
    }
}

impl LacspInstance {
    pub fn new(c0: RsCode, c1: RsCode, g: Arc<dyn LocalMap>, min_distance: usize) -> Result<Self, ProtocolError> {
        if c0.field != c1.field || c0.len() != c1.len() || g.len() != c0.len() {
            return Err(ProtocolError::Invalid("codes and map must share the field and block length".into()));
        }
        if min_distance == 0 || min_distance > c0.len() {
            return Err(ProtocolError::Invalid(format!("minimum distance {min_distance} out of range")));
        }
        Ok(LacspInstance { c0, c1, g, min_distance })
    }

    pub fn field(&self) -> &Field {
        &self.c0.field
    }

    /// Block length `l`.
    pub fn len(&self) -> usize {
        self.c0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c0.is_empty()
    }

    pub fn tau(&self) -> f64 {
        self.min_distance as f64 / self.len() as f64
    }

    pub fn satisfied_by(&self, w0: &[Fe], w1: &[Fe]) -> bool {
        self.c0.contains(w0) && self.c1.contains(w1) && apply_map(self.g.as_ref(), self.field(), w0) == w1
    }

    /// The soundness bound `max{eps, 1 - tau + 2 delta (q + 1)}`.
    pub fn soundness_bound(&self, eps: f64, delta: f64) -> f64 {
        eps.max(1.0 - self.tau() + 2.0 * delta * (self.g.locality() as f64 + 1.0))
    }

    pub fn describe(&self) -> String {
        let f = self.field();
        json!({
            "field": field_label(f),
            "l": self.len(),
            "d0": self.c0.degree,
            "d1": self.c1.degree,
            "g": self.g.name(),
            "q": self.g.locality(),
        })
        .to_string()
    }
}

/// An LACSP instance with a `t`-wise independent subcode `C' ⊆ C0`, here a
/// Reed–Solomon code of degree `t` on the same domain.
#[derive(Clone, Debug)]
pub struct RlacspInstance {
    pub base: LacspInstance,
    pub subcode: RsCode,
}

impl RlacspInstance {
    pub fn new(base: LacspInstance, subcode: RsCode) -> Result<Self, ProtocolError> {
        if subcode.domain != base.c0.domain || subcode.field != base.c0.field {
            return Err(ProtocolError::Invalid("subcode must live on the domain of C0".into()));
        }
        if !subcode.generators().iter().all(|g| base.c0.contains(g)) {
            return Err(ProtocolError::Invalid("subcode is not contained in C0".into()));
        }
        Ok(RlacspInstance { base, subcode })
    }

    /// Independence `t`: any `t` positions of a uniform element of `C'` are
    /// uniform, by bijectivity of interpolation.
    pub fn t(&self) -> usize {
        self.subcode.degree
    }

    /// Query bound `b = t / q`.
    pub fn query_bound(&self) -> usize {
        self.t() / self.base.g.locality()
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn describe(&self) -> String {
        let mut v: serde_json::Value = serde_json::from_str(&self.base.describe()).expect("valid JSON");
        v["t"] = json!(self.t());
        v.to_string()
    }
}

/// The toy family: `C0 = C1 = C' = RS[F, {0, ..., l-1}, d]` with `g` the
/// identity, so `q = s = 1`, `t = d` and `tau = (l - d + 1) / l`.
pub fn toy_rlacsp(field: &Field, ell: usize, d: usize) -> Result<RlacspInstance, ProtocolError> {
    if d >= ell || ell as u64 > field.order() {
        return Err(ProtocolError::Invalid(format!("need d < l <= |F|, got d = {d}, l = {ell}")));
    }
    let domain: Vec<Fe> = (0..ell as u64).map(|x| field.elem(x)).collect();
    let code = RsCode::new(field, domain, d)?;
    let base = LacspInstance::new(code.clone(), code.clone(), Arc::new(IdentityMap::new(ell)), code.min_distance())?;
    RlacspInstance::new(base, code)
}

use std::collections::HashMap;

use super::{DetectError, Detector, QueryPoint};
use crate::algebra::{Fe, Field};
use crate::protocol::{Coins, Namespace};

/// Answered queries in the order they were fixed.
pub type AnswerTable = Vec<(QueryPoint, Fe)>;

/// Value of the constraint `z` on `table` extended by `(q, v)`, where `z` is
/// dense over `points` (the table points followed by `q`).
fn forced_value(f: &Field, z: &[Fe], table: &[(QueryPoint, Fe)]) -> Option<Fe> {
    let zq = *z.last()?;
    if zq.0 == 0 {
        return None;
    }
    let partial = f.sum(z.iter().zip(table).map(|(&c, (_, b))| f.mul(c, *b)));
    Some(f.neg(f.div(partial, zq)))
}

/// Samples `w(q)` for a uniform codeword `w` conditioned on `table`: the value
/// forced by the first echelon constraint touching `q`, or a uniform element.
pub fn sample_conditional<D: Detector + ?Sized>(
    det: &D,
    table: &[(QueryPoint, Fe)],
    q: &QueryPoint,
    coins: &mut dyn Coins,
    ns: Namespace,
) -> Result<Fe, DetectError> {
    let f = det.field();
    if table.iter().any(|(p, _)| p == q) {
        return Err(DetectError::DuplicatePoint(q.to_string()));
    }
    let mut points: Vec<QueryPoint> = table.iter().map(|(p, _)| p.clone()).collect();
    points.push(q.clone());
    let basis = det.detect(&points)?;
    let forced = basis.rows().iter().find_map(|z| forced_value(f, z, table));
    let value = match forced {
        Some(v) => v,
        None => coins.draw_fe(ns, f)?,
    };
    let mut vals: Vec<Fe> = table.iter().map(|(_, b)| *b).collect();
    vals.push(value);
    if basis.rows().iter().any(|z| f.dot(z, &vals).0 != 0) {
        return Err(DetectError::Contradiction);
    }
    Ok(value)
}

/// Rows `r` with `<r, message> = value`, each normalised to 1 at its pivot
/// and zero at the pivots of earlier rows.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Fe>, Fe)>,
}

impl Echelon {
    /// Reduces `v` against the rows, returning the residual and the value
    /// accumulated from the rows used.
    fn reduce(&self, f: &Field, mut v: Vec<Fe>) -> (Vec<Fe>, Fe) {
        let mut acc = f.zero();
        for (p, row, b) in &self.rows {
            let c = v[*p];
            if c.0 != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
                acc = f.add(acc, f.mul(c, *b));
            }
        }
        (v, acc)
    }

    /// Adds a residual from [`Echelon::reduce`] whose entry has value `w`.
    fn push(&mut self, f: &Field, residual: Vec<Fe>, acc: Fe, w: Fe) {
        let Some(p) = residual.iter().position(|x| x.0 != 0) else { return };
        let inv = f.inv(residual[p]).expect("pivot is nonzero");
        let row: Vec<Fe> = residual.iter().map(|&x| f.mul(x, inv)).collect();
        self.rows.push((p, row, f.mul(f.sub(w, acc), inv)));
    }
}

/// How a new entry relates to the core.
enum Status {
    Forced(Fe),
    Free(Option<(Vec<Fe>, Fe)>),
}

/// A lazily sampled uniform codeword.
///
/// Only unforced ("core") entries are kept as conditions; every other entry
/// is a fixed linear function of earlier core entries, so the answers and
/// the coins consumed match repeated [`sample_conditional`] calls on the
/// full table. When the detector exposes expansions the core is kept in
/// echelon form and new entries are reduced against it; otherwise the
/// detector is called on the core plus the new point.
#[derive(Clone, Debug)]
pub struct SamplerSession<D> {
    det: D,
    table: AnswerTable,
    lookup: HashMap<QueryPoint, Fe>,
    core: AnswerTable,
    echelon: Option<Echelon>,
}

impl<D: Detector> SamplerSession<D> {
    pub fn new(det: D) -> Self {
        let echelon = det.code_dim().map(|_| Echelon::default());
        SamplerSession { det, table: Vec::new(), lookup: HashMap::new(), core: Vec::new(), echelon }
    }

    pub fn detector(&self) -> &D {
        &self.det
    }

    /// All fixed entries in the order they were fixed.
    pub fn table(&self) -> &AnswerTable {
        &self.table
    }

    pub fn get(&self, q: &QueryPoint) -> Option<Fe> {
        self.lookup.get(q).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Number of entries that were not forced by earlier ones.
    pub fn core_len(&self) -> usize {
        self.core.len()
    }

    fn status(&self, q: &QueryPoint) -> Result<Status, DetectError> {
        let f = self.det.field();
        if let Some(ech) = &self.echelon {
            let phi = self.det.expansion(q).ok_or_else(|| DetectError::InvalidPoint(q.to_string()))?;
            let (residual, acc) = ech.reduce(f, phi);
            return Ok(if residual.iter().all(|x| x.0 == 0) {
                Status::Forced(acc)
            } else {
                Status::Free(Some((residual, acc)))
            });
        }
        let mut points: Vec<QueryPoint> = self.core.iter().map(|(p, _)| p.clone()).collect();
        points.push(q.clone());
        let basis = self.det.detect(&points)?;
        Ok(match basis.rows().iter().find_map(|z| forced_value(f, z, &self.core)) {
            Some(v) => Status::Forced(v),
            None => Status::Free(None),
        })
    }

    fn record(&mut self, q: QueryPoint, v: Fe, status: Status) {
        if let Status::Free(reduced) = status {
            if let (Some(ech), Some((residual, acc))) = (self.echelon.as_mut(), reduced) {
                ech.push(self.det.field(), residual, acc, v);
            }
            self.core.push((q.clone(), v));
        }
        self.lookup.insert(q.clone(), v);
        self.table.push((q, v));
    }

    /// The codeword's value at `q`, sampling it if not yet fixed.
    pub fn answer(&mut self, q: &QueryPoint, coins: &mut dyn Coins, ns: Namespace) -> Result<Fe, DetectError> {
        if let Some(v) = self.get(q) {
            return Ok(v);
        }
        let status = self.status(q)?;
        let v = match status {
            Status::Forced(v) => v,
            Status::Free(_) => coins.draw_fe(ns, self.det.field())?,
        };
        self.record(q.clone(), v, status);
        Ok(v)
    }

    /// Fixes `w(q) = v`, failing if that contradicts the current table.
    pub fn insert(&mut self, q: &QueryPoint, v: Fe) -> Result<(), DetectError> {
        if let Some(old) = self.get(q) {
            return if old == v { Ok(()) } else { Err(DetectError::Contradiction) };
        }
        let status = self.status(q)?;
        if matches!(status, Status::Forced(w) if w != v) {
            return Err(DetectError::Contradiction);
        }
        self.record(q.clone(), v, status);
        Ok(())
    }

    /// Replaces every value `v` at `q` by `shift(q, v)`. The caller must
    /// ensure the shift is the addition of a fixed codeword, which keeps the
    /// forced/core structure valid.
    pub fn translate(&mut self, mut shift: impl FnMut(&QueryPoint, Fe) -> Fe) {
        for (q, v) in self.table.iter_mut() {
            *v = shift(q, *v);
            self.lookup.insert(q.clone(), *v);
        }
        for (q, v) in self.core.iter_mut() {
            *v = self.lookup[q];
        }
        if self.echelon.is_some() {
            let f = self.det.field().clone();
            let mut ech = Echelon::default();
            for (q, v) in &self.core {
                let phi = self.det.expansion(q).expect("core points have expansions");
                let (residual, acc) = ech.reduce(&f, phi);
                ech.push(&f, residual, acc, *v);
            }
            self.echelon = Some(ech);
        }
    }
}

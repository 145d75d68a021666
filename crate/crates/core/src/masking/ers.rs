use std::sync::Arc;

use serde_json::json;

use crate::algebra::{linalg, Fe, Field, UniPoly, VanishingPoly};
use crate::bsrs::{prove_with, BsrsCode, BsrsIndex};
use crate::detect::{check_distinct, ConstraintBasis, DetectError, Detector, QueryPoint};
use crate::protocol::ProtocolError;
use crate::sumcheck::field_label;

use super::{row_column_test, LinearPcpp, ProximityAccess, DEFAULT_REPS};

/// Random-position checks of `Z_H(x) w1'(x) = w1(x)` per verification.
pub const LINK_CHECKS: usize = 8;

/// Where a position of the concatenated word lives: in the first BS-RS
/// word, or as `coeff` times a position of the second.
#[derive(Clone, Copy, Debug)]
enum Part {
    First(usize),
    Second(usize, Fe),
}

/// The concatenated family of [`ErsPcpp`]: positions are `w0`, `w1`, then
/// the proof `pi0 || w1' || pi1`, where `w0 || pi0` is a BS-RS codeword of
/// the first index, `w1' || pi1` one of the second, and `w1 = Z_H w1'`
/// pointwise on `L`.
pub struct ErsCode {
    field: Field,
    code0: Arc<BsrsCode>,
    code1: Arc<BsrsCode>,
    zh_on_l: Vec<Fe>,
    generators: Vec<Vec<Fe>>,
}

impl ErsCode {
    fn new(code0: Arc<BsrsCode>, code1: Arc<BsrsCode>, zh_on_l: Vec<Fe>) -> Self {
        let field = code0.root().field().clone();
        let mut code = ErsCode { field, code0, code1, zh_on_l, generators: Vec::new() };
        let len = code.len();
        let f = code.field.clone();
        let mut gens = Vec::new();
        for g in code.code0.root().generators() {
            let mut w = vec![f.zero(); len];
            for (i, &v) in g.iter().enumerate() {
                if let Some(p) = code.position(true, i) {
                    w[p] = v;
                }
            }
            gens.push(w);
        }
        for g in code.code1.root().generators() {
            let mut w = vec![f.zero(); len];
            for (i, &v) in g.iter().enumerate() {
                if let Some(p) = code.position(false, i) {
                    w[p] = v;
                }
            }
            let n = code.n();
            for x in 0..n {
                w[n + x] = f.mul(code.zh_on_l[x], g[x]);
            }
            gens.push(w);
        }
        code.generators = gens;
        code
    }

    fn n(&self) -> usize {
        self.zh_on_l.len()
    }

    fn p0(&self) -> usize {
        self.code0.root().prox_len()
    }

    fn p1(&self) -> usize {
        self.code1.root().prox_len()
    }

    pub fn len(&self) -> usize {
        3 * self.n() + self.p0() + self.p1()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Generator words, one per message coefficient.
    pub fn generators(&self) -> &[Vec<Fe>] {
        &self.generators
    }

    /// Position of BS-RS position `i` of the first (`first`) or second word.
    fn position(&self, first: bool, i: usize) -> Option<usize> {
        let n = self.n();
        let (rs_base, px_base, px_len) =
            if first { (0, 2 * n, self.p0()) } else { (2 * n + self.p0(), 3 * n + self.p0(), self.p1()) };
        if i < n {
            Some(rs_base + i)
        } else if i - n < px_len {
            Some(px_base + i - n)
        } else {
            None
        }
    }

    fn locate(&self, pos: usize) -> Option<Part> {
        let (n, p0, p1) = (self.n(), self.p0(), self.p1());
        let one = self.field.one();
        Some(if pos < n {
            Part::First(pos)
        } else if pos < 2 * n {
            Part::Second(pos - n, self.zh_on_l[pos - n])
        } else if pos < 2 * n + p0 {
            Part::First(n + pos - 2 * n)
        } else if pos < 3 * n + p0 {
            Part::Second(pos - 2 * n - p0, one)
        } else if pos < 3 * n + p0 + p1 {
            Part::Second(n + pos - 3 * n - p0, one)
        } else {
            return None;
        })
    }
}

impl Detector for ErsCode {
    fn field(&self) -> &Field {
        &self.field
    }

    /// Constraints of the first word come from its BS-RS detector. For the
    /// second, a combination `sum_i z_i c_i` of the queried positions is a
    /// constraint exactly when the induced combination of BS-RS positions
    /// lies in the span of the BS-RS constraints on those positions; the
    /// admissible `z` form the projection of a nullspace.
    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        check_distinct(points)?;
        let f = &self.field;
        let mut first = Vec::new();
        let mut second = Vec::new();
        for (k, q) in points.iter().enumerate() {
            let part = match q {
                QueryPoint::Index(i) => self.locate(*i),
                _ => None,
            };
            match part.ok_or_else(|| DetectError::InvalidPoint(q.to_string()))? {
                Part::First(i) => first.push((k, i)),
                Part::Second(i, c) => second.push((k, i, c)),
            }
        }
        let mut rows = Vec::new();
        if !first.is_empty() {
            let qp: Vec<QueryPoint> = first.iter().map(|&(_, i)| QueryPoint::Index(i)).collect();
            for r in self.code0.detect(&qp)?.rows() {
                let mut row = vec![f.zero(); points.len()];
                for (&(k, _), &v) in first.iter().zip(r) {
                    row[k] = v;
                }
                rows.push(row);
            }
        }
        if !second.is_empty() {
            let mut js: Vec<usize> = second.iter().map(|&(_, i, _)| i).collect();
            js.sort_unstable();
            js.dedup();
            let qp: Vec<QueryPoint> = js.iter().map(|&j| QueryPoint::Index(j)).collect();
            let dual = self.code1.detect(&qp)?;
            let (nz, nl) = (second.len(), dual.rank());
            let mut system = vec![vec![f.zero(); nz + nl]; js.len()];
            for (col, &(_, i, c)) in second.iter().enumerate() {
                let r = js.binary_search(&i).expect("position collected above");
                system[r][col] = c;
            }
            for (k, d) in dual.rows().iter().enumerate() {
                for (r, &v) in d.iter().enumerate() {
                    system[r][nz + k] = f.neg(v);
                }
            }
            for sol in linalg::nullspace(f, &system, nz + nl) {
                let mut row = vec![f.zero(); points.len()];
                for (&(k, _, _), &v) in second.iter().zip(&sol) {
                    row[k] = v;
                }
                rows.push(row);
            }
        }
        Ok(ConstraintBasis::new(f, points.to_vec(), rows))
    }

    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        match q {
            QueryPoint::Index(i) if *i < self.len() => Some(self.generators.iter().map(|g| g[*i]).collect()),
            _ => None,
        }
    }

    fn code_dim(&self) -> Option<usize> {
        Some(self.generators.len())
    }
}

/// Pairs `(w0, w1)` of evaluations on `L` with `deg w0 < d0`, `deg w1 < d1`
/// and `w1` vanishing on `H`. The proof is `pi0 || w1' || pi1`: the BS-RS
/// proof of `w0`, the evaluations of `w1 / Z_H` on `L`, and the BS-RS proof
/// of those.
pub struct ErsPcpp {
    idx0: BsrsIndex,
    idx1: BsrsIndex,
    h: Vec<Fe>,
    zh: VanishingPoly,
    code: Arc<ErsCode>,
    reps: usize,
    links: usize,
}

/// Builds the PCPP for `d0 = idx0.degree()` and `d1 = idx1.degree() + |H|`.
/// Both indices must describe the same `L`, and `8 |H| <= |L|`.
pub fn ers_pcpp(idx0: &BsrsIndex, idx1: &BsrsIndex, h: &[Fe]) -> Result<ErsPcpp, ProtocolError> {
    if idx0.field != idx1.field || idx0.basis != idx1.basis || idx0.s != idx1.s {
        return Err(ProtocolError::Invalid("both components must live on the same L".into()));
    }
    let f = idx0.field.clone();
    let mut hs = h.to_vec();
    hs.sort_unstable();
    hs.dedup();
    if hs.len() != h.len() || h.iter().any(|x| x.0 >= f.order()) {
        return Err(ProtocolError::Invalid("H must be a set of field elements".into()));
    }
    let code0 = Arc::new(BsrsCode::new(idx0)?);
    let code1 = Arc::new(BsrsCode::new(idx1)?);
    let l = code0.root().l().clone();
    if 8 * h.len() > l.len() {
        return Err(ProtocolError::Invalid(format!("|H| = {} exceeds |L| / 8 = {}", h.len(), l.len() / 8)));
    }
    let zh = VanishingPoly::of_set(&f, h);
    let zh_on_l = l.elements().iter().map(|&x| zh.eval(&f, x)).collect();
    let code = Arc::new(ErsCode::new(code0, code1, zh_on_l));
    Ok(ErsPcpp {
        idx0: idx0.clone(),
        idx1: idx1.clone(),
        h: h.to_vec(),
        zh,
        code,
        reps: DEFAULT_REPS,
        links: LINK_CHECKS,
    })
}

impl ErsPcpp {
    pub fn with_reps(mut self, reps: usize, links: usize) -> Self {
        self.reps = reps;
        self.links = links;
        self
    }

    /// `(d0, d1)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.idx0.degree(), self.idx1.degree() + self.h.len())
    }

    pub fn code(&self) -> &Arc<ErsCode> {
        &self.code
    }

    fn n(&self) -> usize {
        self.code.n()
    }

    /// The elements of `L` in position order.
    pub fn domain(&self) -> &[Fe] {
        self.code.code0.root().l().elements()
    }

    /// Evaluations of `w1 / Z_H` on `L`, failing when `Z_H` does not divide
    /// the polynomial of `w1` or the quotient is too large.
    pub fn divide(&self, w1: &[Fe]) -> Result<Vec<Fe>, ProtocolError> {
        let f = &self.idx0.field;
        let pts: Vec<(Fe, Fe)> = self.domain().iter().copied().zip(w1.iter().copied()).collect();
        let p = UniPoly::interpolate(f, &pts)?;
        let (q, r) = p.divrem(f, self.zh.poly());
        if !r.trimmed().is_zero() {
            return Err(ProtocolError::Invalid("w1 does not vanish on H".into()));
        }
        if q.clone().trimmed().degree().is_some_and(|d| d >= self.idx1.degree()) {
            return Err(ProtocolError::Invalid(format!("w1 has degree at least {}", self.degrees().1)));
        }
        Ok(self.domain().iter().map(|&x| q.eval(f, x)).collect())
    }
}

impl LinearPcpp for ErsPcpp {
    fn field(&self) -> &Field {
        &self.idx0.field
    }

    fn input_len(&self) -> usize {
        2 * self.n()
    }

    fn proof_len(&self) -> usize {
        self.n() + self.code.p0() + self.code.p1()
    }

    fn code_dim(&self) -> usize {
        self.code.generators.len()
    }

    /// `msg` holds the `d0` coefficients of `w0` followed by the
    /// `d1 - |H|` coefficients of `w1 / Z_H`.
    fn encode(&self, msg: &[Fe]) -> Result<Vec<Fe>, ProtocolError> {
        if msg.len() != self.code_dim() {
            return Err(ProtocolError::Shape(format!(
                "message of length {} for dimension {}",
                msg.len(),
                self.code_dim()
            )));
        }
        let f = self.field();
        let d0 = self.idx0.degree();
        let p0 = UniPoly::new(msg[..d0].to_vec());
        let p1 = UniPoly::new(msg[d0..].to_vec()).mul(f, self.zh.poly());
        let mut w: Vec<Fe> = self.domain().iter().map(|&x| p0.eval(f, x)).collect();
        w.extend(self.domain().iter().map(|&x| p1.eval(f, x)));
        Ok(w)
    }

    fn prove(&self, w: &[Fe]) -> Result<Vec<Fe>, ProtocolError> {
        let n = self.n();
        if w.len() != 2 * n {
            return Err(ProtocolError::Shape(format!("word of length {} for input length {}", w.len(), 2 * n)));
        }
        let pi0 = prove_with(self.code.code0.root(), &w[..n])?;
        let w1p = self.divide(&w[n..])?;
        let pi1 = prove_with(self.code.code1.root(), &w1p)?;
        let mut out = pi0[n..].to_vec();
        out.extend_from_slice(&w1p);
        out.extend_from_slice(&pi1[n..]);
        Ok(out)
    }

    fn detector(&self) -> Arc<dyn Detector + Send + Sync> {
        self.code.clone()
    }

    /// Row/column tests on both BS-RS words, then `Z_H(x) w1'(x) = w1(x)`
    /// at random `x in L`.
    fn verify(&self, access: &mut dyn ProximityAccess) -> Result<bool, ProtocolError> {
        let n = self.n();
        let p0 = self.code.p0();
        let first = |i: usize| if i < n { i } else { 2 * n + (i - n) };
        let second = |i: usize| 2 * n + p0 + i;
        for _ in 0..self.reps {
            if !row_column_test(self.code.code0.root(), &first, access)? {
                return Ok(false);
            }
            if !row_column_test(self.code.code1.root(), &second, access)? {
                return Ok(false);
            }
        }
        let f = self.field().clone();
        for _ in 0..self.links {
            let x = access.coin_index("link", n as u64)? as usize;
            let w1 = access.read(n + x)?;
            let w1p = access.read(second(x))?;
            if f.mul(self.code.zh_on_l[x], w1p) != w1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn describe(&self) -> String {
        let f = self.field();
        json!({
            "pcpp": "ers",
            "field": field_label(f),
            "basis": self.idx0.basis.iter().map(|&b| f.format(b)).collect::<Vec<_>>(),
            "mu": [self.idx0.mu, self.idx1.mu],
            "k": [self.idx0.k, self.idx1.k],
            "H": self.h.iter().map(|&x| f.format(x)).collect::<Vec<_>>(),
            "reps": self.reps,
            "links": self.links,
        })
        .to_string()
    }
}

use std::sync::Arc;

use serde_json::json;

use crate::algebra::{Fe, Subspace, UniPoly};
use crate::bsrs::{prove_with, BsrsCode, BsrsIndex, BsrsNode};
use crate::detect::Detector;
use crate::protocol::ProtocolError;
use crate::sumcheck::field_label;

use super::{fits_degree, LinearPcpp, ProximityAccess};

/// Repetitions of the row/column test used by [`rs_pcpp`].
pub const DEFAULT_REPS: usize = 8;

/// Column labels `L'_0` of a node.
fn columns(node: &BsrsNode) -> Result<Vec<Fe>, ProtocolError> {
    if let Some(l0p) = node.l0_prime() {
        return Ok(l0p.elements().to_vec());
    }
    let idx = node.index();
    let h = idx.dim() / 2;
    let span = Subspace::span(&idx.field, idx.s, idx.basis[..h + idx.mu - 1].to_vec())?;
    Ok(span.elements().to_vec())
}

/// One pass of the row/column consistency test on the BS-RS word rooted
/// at `node`, where `pos` maps node positions to access positions.
///
/// Each level samples one row and one column and recurses into both
/// children. At a base node the sampled row must agree with a polynomial of
/// degree below `|L_0|` and the sampled column, read at the points
/// `Z(beta)`, with one of degree below `deg / |L_0|`.
pub fn row_column_test(
    node: &BsrsNode,
    pos: &dyn Fn(usize) -> usize,
    access: &mut dyn ProximityAccess,
) -> Result<bool, ProtocolError> {
    let f = node.field().clone();
    let rows = node.rows();
    let cols = columns(node)?;
    let bi = access.coin_index("row", rows.len() as u64)? as usize;
    let ai = access.coin_index("col", cols.len() as u64)? as usize;
    if !node.is_base() {
        let row_child = &node.row_children()[bi];
        let col_child = node.col_child().expect("split node has a column child");
        let row_pos = |x: usize| pos(node.row_embed(bi, x));
        if !row_column_test(row_child, &row_pos, access)? {
            return Ok(false);
        }
        let col_pos = |x: usize| pos(node.col_embed(ai, x));
        return row_column_test(col_child, &col_pos, access);
    }
    let mut row_pts = Vec::with_capacity(rows[bi].l_beta.len());
    for &alpha in rows[bi].l_beta.elements() {
        row_pts.push((alpha, access.read(pos(node.phi(alpha, bi)))?));
    }
    if !fits_degree(&f, &row_pts, node.l0().len())? {
        return Ok(false);
    }
    let alpha = cols[ai];
    let mut col_pts = Vec::with_capacity(rows.len());
    for (b, row) in rows.iter().enumerate() {
        col_pts.push((row.z_beta, access.read(pos(node.phi(alpha, b)))?));
    }
    let col_bound = (node.degree() / node.l0().len()).max(1);
    fits_degree(&f, &col_pts, col_bound)
}

/// Reed–Solomon codes over a binary subspace `L`, with the BS-RS proof as
/// the proof map.
pub struct RsPcpp {
    idx: BsrsIndex,
    code: Arc<BsrsCode>,
    reps: usize,
}

/// The linear PCPP for `RS[L, |L| |K|^-mu]` with [`DEFAULT_REPS`] passes.
pub fn rs_pcpp(idx: &BsrsIndex) -> Result<RsPcpp, ProtocolError> {
    let code = Arc::new(BsrsCode::new(idx)?);
    Ok(RsPcpp { idx: idx.clone(), code, reps: DEFAULT_REPS })
}

impl RsPcpp {
    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn root(&self) -> &Arc<BsrsNode> {
        self.code.root()
    }

    pub fn index(&self) -> &BsrsIndex {
        &self.idx
    }
}

impl LinearPcpp for RsPcpp {
    fn field(&self) -> &crate::algebra::Field {
        &self.idx.field
    }

    fn input_len(&self) -> usize {
        self.root().rs_len()
    }

    fn proof_len(&self) -> usize {
        self.root().prox_len()
    }

    fn code_dim(&self) -> usize {
        self.root().degree()
    }

    fn encode(&self, msg: &[Fe]) -> Result<Vec<Fe>, ProtocolError> {
        if msg.len() != self.code_dim() {
            return Err(ProtocolError::Shape(format!(
                "message of length {} for dimension {}",
                msg.len(),
                self.code_dim()
            )));
        }
        let f = self.field();
        let p = UniPoly::new(msg.to_vec());
        Ok(self.root().l().elements().iter().map(|&a| p.eval(f, a)).collect())
    }

    fn prove(&self, w: &[Fe]) -> Result<Vec<Fe>, ProtocolError> {
        let full = prove_with(self.root(), w)?;
        Ok(full[self.input_len()..].to_vec())
    }

    fn detector(&self) -> Arc<dyn Detector + Send + Sync> {
        self.code.clone()
    }

    fn verify(&self, access: &mut dyn ProximityAccess) -> Result<bool, ProtocolError> {
        for _ in 0..self.reps {
            if !row_column_test(self.root(), &|x| x, access)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn describe(&self) -> String {
        let f = &self.idx.field;
        json!({
            "pcpp": "rs",
            "field": field_label(f),
            "basis": self.idx.basis.iter().map(|&b| f.format(b)).collect::<Vec<_>>(),
            "mu": self.idx.mu,
            "k": self.idx.k,
            "reps": self.reps,
        })
        .to_string()
    }
}

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{linalg, Fe, Field, Subspace, UniPoly, VanishingPoly};

use super::{BsrsError, BsrsIndex};

/// One row of the bivariate domain: `beta in L_1` with its row subspace.
#[derive(Clone, Debug)]
pub struct Row {
    pub beta: Fe,
    pub z_beta: Fe,
    pub l_beta: Subspace,
}

#[derive(Debug)]
struct Split {
    /// `L'_0`, the column labels.
    l0_prime: Subspace,
    col_child: Arc<BsrsNode>,
    row_children: Vec<Arc<BsrsNode>>,
    col_offsets: Vec<usize>,
    row_offsets: Vec<usize>,
}

/// A node of the recursive BS-RS domain. Positions are numbered
/// `rs` (one per element of `L`, in enumeration order), then the node's own
/// `px` points, then the proximity parts of each column child and each row
/// child.
#[derive(Debug)]
pub struct BsrsNode {
    index: BsrsIndex,
    l: Subspace,
    l0: Subspace,
    l1: Subspace,
    z: VanishingPoly,
    rows: Vec<Row>,
    px: Vec<(Fe, usize)>,
    px_index: HashMap<(Fe, usize), usize>,
    split: Option<Split>,
    size: usize,
    generators: OnceLock<Vec<Vec<Fe>>>,
    dual: OnceLock<Vec<Vec<Fe>>>,
}

/// The full BS-RS domain rooted at an index.
pub type BsrsDomain = Arc<BsrsNode>;

/// Builds the recursive domain for `idx`.
pub fn bsrs_domain(idx: &BsrsIndex) -> Result<BsrsDomain, BsrsError> {
    let mut cache = HashMap::new();
    BsrsNode::build(idx, &mut cache)
}

impl BsrsNode {
    fn build(idx: &BsrsIndex, cache: &mut HashMap<Vec<Fe>, Arc<BsrsNode>>) -> Result<Arc<BsrsNode>, BsrsError> {
        if let Some(n) = cache.get(&idx.basis) {
            return Ok(n.clone());
        }
        let f = &idx.field;
        let k_elems = f.subfield(idx.s)?;
        let span = |b: &[Fe]| Subspace::span_over(f, k_elems.clone(), b.to_vec());
        let ell = idx.dim();
        let h = ell / 2;
        let b = &idx.basis;
        let l = span(b)?;
        let l0 = span(&b[..h])?;
        let l0_prime = span(&b[..h + idx.mu - 1])?;
        let l1 = span(&b[h..])?;
        let z = l0.vanishing_poly();
        let mut rows = Vec::with_capacity(l1.len());
        for &beta in l1.elements() {
            let beta_prime = if l0_prime.contains(beta) { b[h + idx.mu - 1] } else { beta };
            let mut rb = b[..h + idx.mu - 1].to_vec();
            rb.push(beta_prime);
            rows.push(Row { beta, z_beta: z.eval(f, beta), l_beta: span(&rb)? });
        }
        let mut px = Vec::new();
        for (bi, row) in rows.iter().enumerate() {
            for &alpha in row.l_beta.elements() {
                if !l0.contains(f.sub(alpha, row.beta)) {
                    px.push((alpha, bi));
                }
            }
        }
        let px_index = px.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut size = l.len() + px.len();
        let split = if ell > idx.k {
            let col_basis: Vec<Fe> = b[h..].iter().map(|&x| z.eval(f, x)).collect();
            let col_idx = BsrsIndex { basis: col_basis, ..idx.clone() };
            let col_child = BsrsNode::build(&col_idx, cache)?;
            let mut col_offsets = Vec::with_capacity(l0_prime.len());
            for _ in l0_prime.elements() {
                col_offsets.push(size);
                size += col_child.prox_len();
            }
            let mut row_children = Vec::with_capacity(rows.len());
            let mut row_offsets = Vec::with_capacity(rows.len());
            for row in &rows {
                let row_idx = BsrsIndex { basis: row.l_beta.basis().to_vec(), ..idx.clone() };
                let child = BsrsNode::build(&row_idx, cache)?;
                row_offsets.push(size);
                size += child.prox_len();
                row_children.push(child);
            }
            Some(Split { l0_prime, col_child, row_children, col_offsets, row_offsets })
        } else {
            None
        };
        let node = Arc::new(BsrsNode {
            index: idx.clone(),
            l,
            l0,
            l1,
            z,
            rows,
            px,
            px_index,
            split,
            size,
            generators: OnceLock::new(),
            dual: OnceLock::new(),
        });
        cache.insert(idx.basis.clone(), node.clone());
        Ok(node)
    }

    pub fn index(&self) -> &BsrsIndex {
        &self.index
    }

    pub fn field(&self) -> &Field {
        &self.index.field
    }

    pub fn l(&self) -> &Subspace {
        &self.l
    }

    pub fn l0(&self) -> &Subspace {
        &self.l0
    }

    pub fn l1(&self) -> &Subspace {
        &self.l1
    }

    pub fn l0_prime(&self) -> Option<&Subspace> {
        self.split.as_ref().map(|s| &s.l0_prime)
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn vanishing(&self) -> &VanishingPoly {
        &self.z
    }

    /// `(alpha, row index)` for every bivariate proximity point of this node.
    pub fn px_points(&self) -> &[(Fe, usize)] {
        &self.px
    }

    pub fn is_base(&self) -> bool {
        self.split.is_none()
    }

    /// Total number of positions.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Number of `rs` positions, `|L|`.
    pub fn rs_len(&self) -> usize {
        self.l.len()
    }

    /// Number of proximity positions.
    pub fn prox_len(&self) -> usize {
        self.size - self.l.len()
    }

    /// Message length `|L| * rho`.
    pub fn degree(&self) -> usize {
        self.index.degree()
    }

    pub fn col_child(&self) -> Option<&Arc<BsrsNode>> {
        self.split.as_ref().map(|s| &s.col_child)
    }

    pub fn row_children(&self) -> &[Arc<BsrsNode>] {
        self.split.as_ref().map_or(&[], |s| &s.row_children)
    }

    /// Number of halvings until every leaf is a base case.
    pub fn depth(&self) -> usize {
        match &self.split {
            None => 0,
            Some(s) => {
                1 + s
                    .row_children
                    .iter()
                    .map(|c| c.depth())
                    .chain(std::iter::once(s.col_child.depth()))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Position of `phi(alpha, Z(beta))` for `beta = L_1[bi]`.
    pub fn phi(&self, alpha: Fe, bi: usize) -> usize {
        let f = self.field();
        if self.l0.contains(f.sub(alpha, self.rows[bi].beta)) {
            self.l.index_of(alpha).expect("alpha lies in L")
        } else {
            self.l.len() + self.px_index[&(alpha, bi)]
        }
    }

    /// `phi_{col, alpha}` for `alpha = L'_0[ai]`, mapping a column-child
    /// position to a position of this node.
    pub fn col_embed(&self, ai: usize, x: usize) -> usize {
        let s = self.split.as_ref().expect("column embedding on a base node");
        let child_rs = s.col_child.rs_len();
        if x < child_rs {
            self.phi(s.l0_prime.elements()[ai], x)
        } else {
            s.col_offsets[ai] + (x - child_rs)
        }
    }

    /// `phi_{row, beta}` for `beta = L_1[bi]`.
    pub fn row_embed(&self, bi: usize, x: usize) -> usize {
        let s = self.split.as_ref().expect("row embedding on a base node");
        let child_rs = s.row_children[bi].rs_len();
        if x < child_rs {
            self.phi(self.rows[bi].l_beta.elements()[x], bi)
        } else {
            s.row_offsets[bi] + (x - child_rs)
        }
    }

    /// Human-readable path of a position, e.g. `row:β=0x4/px:α=0x3,β=0x2`.
    pub fn position_path(&self, pos: usize) -> String {
        let f = self.field();
        if pos < self.l.len() {
            return format!("rs:α={}", f.format(self.l.elements()[pos]));
        }
        let p = pos - self.l.len();
        if p < self.px.len() {
            let (alpha, bi) = self.px[p];
            return format!("px:α={},β={}", f.format(alpha), f.format(self.rows[bi].beta));
        }
        let s = self.split.as_ref().expect("position beyond a base node");
        for (ai, &off) in s.col_offsets.iter().enumerate() {
            if pos >= off && pos < off + s.col_child.prox_len() {
                let inner = s.col_child.position_path(s.col_child.rs_len() + pos - off);
                return format!("col:α={}/{}", f.format(s.l0_prime.elements()[ai]), inner);
            }
        }
        for (bi, &off) in s.row_offsets.iter().enumerate() {
            let child = &s.row_children[bi];
            if pos >= off && pos < off + child.prox_len() {
                let inner = child.position_path(child.rs_len() + pos - off);
                return format!("row:β={}/{}", f.format(self.rows[bi].beta), inner);
            }
        }
        unreachable!("position {pos} outside a domain of size {}", self.size)
    }

    /// `p = sum_i g_i(X) Z(X)^i` with `deg g_i < |L_0|`.
    fn decompose(&self, p: &UniPoly) -> Vec<UniPoly> {
        let f = self.field();
        let zp = self.z.poly();
        let n_terms = (self.degree() / self.l0.len()).max(1);
        let mut parts = Vec::with_capacity(n_terms);
        let mut cur = p.clone();
        for _ in 0..n_terms {
            let (q, r) = cur.divrem(f, zp);
            parts.push(r);
            cur = q;
        }
        debug_assert!(cur.is_zero());
        parts
    }

    /// The BS-RS codeword whose `rs` part evaluates `p`.
    pub fn encode(&self, p: &UniPoly) -> Result<Vec<Fe>, BsrsError> {
        if p.degree().is_some_and(|d| d >= self.degree()) {
            return Err(BsrsError::NotLowDegree { bound: self.degree() });
        }
        let f = self.field();
        let mut out = vec![f.zero(); self.size];
        for (i, &a) in self.l.elements().iter().enumerate() {
            out[i] = p.eval(f, a);
        }
        let g = self.decompose(p);
        let g_at = |alpha: Fe, y: Fe| g.iter().rev().fold(f.zero(), |acc, gi| f.add(f.mul(acc, y), gi.eval(f, alpha)));
        let base = self.l.len();
        for (j, &(alpha, bi)) in self.px.iter().enumerate() {
            out[base + j] = g_at(alpha, self.rows[bi].z_beta);
        }
        if let Some(s) = &self.split {
            let child = &s.col_child;
            for (ai, &alpha) in s.l0_prime.elements().iter().enumerate() {
                let col = UniPoly::new(g.iter().map(|gi| gi.eval(f, alpha)).collect());
                let word = child.encode(&col)?;
                let off = s.col_offsets[ai];
                out[off..off + child.prox_len()].copy_from_slice(&word[child.rs_len()..]);
            }
            for (bi, row) in self.rows.iter().enumerate() {
                let mut rp = UniPoly::zero();
                let mut zpow = f.one();
                for gi in &g {
                    rp = rp.add(f, &gi.scale(f, zpow));
                    zpow = f.mul(zpow, row.z_beta);
                }
                let child = &s.row_children[bi];
                let word = child.encode(&rp)?;
                let off = s.row_offsets[bi];
                out[off..off + child.prox_len()].copy_from_slice(&word[child.rs_len()..]);
            }
        }
        Ok(out)
    }

    /// Interpolates the `rs` part of `w`, failing unless it has degree below
    /// `|L| * rho`.
    pub fn rs_polynomial(&self, rs: &[Fe]) -> Result<UniPoly, BsrsError> {
        let pts: Vec<(Fe, Fe)> = self.l.elements().iter().copied().zip(rs.iter().copied()).collect();
        let p = UniPoly::interpolate(self.field(), &pts)?.trimmed();
        if p.degree().is_some_and(|d| d >= self.degree()) {
            return Err(BsrsError::NotLowDegree { bound: self.degree() });
        }
        Ok(p)
    }

    /// Whether `w` is a codeword of this node's code.
    pub fn contains(&self, w: &[Fe]) -> bool {
        w.len() == self.size
            && self.rs_polynomial(&w[..self.l.len()]).and_then(|p| self.encode(&p)).is_ok_and(|full| full == w)
    }

    /// Encodings of `1, X, ..., X^{deg-1}`.
    pub fn generators(&self) -> &[Vec<Fe>] {
        self.generators.get_or_init(|| {
            let f = self.field();
            (0..self.degree())
                .map(|j| {
                    let mut c = vec![f.zero(); j + 1];
                    c[j] = f.one();
                    self.encode(&UniPoly::new(c)).expect("monomial below the degree bound")
                })
                .collect()
        })
    }

    /// Basis of the dual code over all positions.
    pub fn dual(&self) -> &[Vec<Fe>] {
        self.dual.get_or_init(|| linalg::nullspace(self.field(), self.generators(), self.size))
    }
}

/// The unique BS-RS completion of an `rs` codeword `w` on `L`.
pub fn bsrs_prove(idx: &BsrsIndex, w: &[Fe]) -> Result<Vec<Fe>, BsrsError> {
    let dom = bsrs_domain(idx)?;
    prove_with(&dom, w)
}

/// [`bsrs_prove`] on an already built domain.
pub fn prove_with(dom: &BsrsNode, w: &[Fe]) -> Result<Vec<Fe>, BsrsError> {
    if w.len() != dom.rs_len() {
        return Err(BsrsError::Invalid(format!("word of length {} on |L| = {}", w.len(), dom.rs_len())));
    }
    let p = dom.rs_polynomial(w)?;
    dom.encode(&p)
}

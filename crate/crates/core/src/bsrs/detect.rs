use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Fe, Field};
use crate::detect::{
    brute_force_detect, check_distinct, spanning_to_basis, ConstraintBasis, ConstraintVector, DetectError, Detector,
    QueryPoint,
};

use super::cover::{recursive_cover, RecursiveCover};
use super::domain::{bsrs_domain, BsrsNode};
use super::{BsrsError, BsrsIndex};

/// A BS-RS code with its recursive cover, usable as a [`Detector`] over
/// [`QueryPoint::Index`] positions.
#[derive(Debug, Clone)]
pub struct BsrsCode {
    root: Arc<BsrsNode>,
    cover: Arc<OnceLock<RecursiveCover>>,
}

impl BsrsCode {
    pub fn new(idx: &BsrsIndex) -> Result<Self, BsrsError> {
        Ok(BsrsCode { root: bsrs_domain(idx)?, cover: Arc::new(OnceLock::new()) })
    }

    pub fn root(&self) -> &Arc<BsrsNode> {
        &self.root
    }

    pub fn cover(&self) -> &RecursiveCover {
        self.cover.get_or_init(|| recursive_cover(&self.root))
    }

    /// Layer used for `n` queries: the largest `d` such that every vertex in
    /// layers `< d` has `|K|^{dim/2 - mu - 2} >= n`.
    pub fn depth_for(&self, n: usize) -> usize {
        let idx = self.root.index();
        let q = idx.subfield_order() as f64;
        let cover = self.cover();
        let mut d = 0;
        while d < cover.depth() {
            let ok = cover.layer(d).iter().all(|v| {
                let dim = v.view.code.l().dim() as f64;
                q.powf(dim / 2.0 - idx.mu as f64 - 2.0) >= n as f64
            });
            if !ok {
                break;
            }
            d += 1;
        }
        d
    }

    fn positions(&self, points: &[QueryPoint]) -> Result<Vec<usize>, DetectError> {
        points
            .iter()
            .map(|p| match p {
                QueryPoint::Index(i) if *i < self.root.len() => Ok(*i),
                other => Err(DetectError::InvalidPoint(other.to_string())),
            })
            .collect()
    }

    /// Detection through the views of layer `depth` of the recursive cover.
    /// Depth 0 is Gaussian elimination on the whole code.
    pub fn detect_at_depth(&self, points: &[QueryPoint], depth: usize) -> Result<ConstraintBasis, DetectError> {
        check_distinct(points)?;
        let pos = self.positions(points)?;
        let f = self.root.field();
        if depth == 0 {
            return brute_force_detect(f, self.root.generators(), &pos);
        }
        let cover = self.cover();
        if depth > cover.depth() {
            return Err(DetectError::Shape(format!("depth {depth} exceeds cover depth {}", cover.depth())));
        }
        let layer = cover.layer(depth);
        let mut chosen = BTreeMap::new();
        for &p in &pos {
            let vi = layer
                .iter()
                .position(|v| v.view.positions.contains(&p))
                .expect("every layer of the cover covers the domain");
            chosen.insert(vi, ());
        }
        let mut spanning = Vec::new();
        for &vi in chosen.keys() {
            let view = &layer[vi].view;
            for z in view.code.dual() {
                spanning.push(ConstraintVector::new(
                    z.iter().enumerate().map(|(x, &c)| (QueryPoint::Index(view.positions[x]), c)).collect(),
                ));
            }
        }
        Ok(spanning_to_basis(f, &spanning, points))
    }
}

impl Detector for BsrsCode {
    fn field(&self) -> &Field {
        self.root.field()
    }

    fn detect(&self, points: &[QueryPoint]) -> Result<ConstraintBasis, DetectError> {
        self.detect_at_depth(points, self.depth_for(points.len()))
    }

    fn expansion(&self, q: &QueryPoint) -> Option<Vec<Fe>> {
        match q {
            QueryPoint::Index(i) if *i < self.root.len() => {
                Some(self.root.generators().iter().map(|g| g[*i]).collect())
            }
            _ => None,
        }
    }

    fn code_dim(&self) -> Option<usize> {
        Some(self.root.degree())
    }
}

/// Detector for the BS-RS code of `idx` on the position set `points`.
pub fn bsrs_detect(idx: &BsrsIndex, points: &[usize]) -> Result<ConstraintBasis, BsrsError> {
    let code = BsrsCode::new(idx)?;
    let qp: Vec<QueryPoint> = points.iter().map(|&i| QueryPoint::Index(i)).collect();
    Ok(code.detect(&qp)?)
}

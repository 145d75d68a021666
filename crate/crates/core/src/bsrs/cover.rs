use std::collections::BTreeSet;
use std::sync::Arc;

use super::domain::BsrsNode;

/// A local view: positions of the enclosing domain together with the code
/// that the restriction of the enclosing code to those positions equals.
/// `positions[x]` is the image of the view code's position `x`.
#[derive(Clone, Debug)]
pub struct CoverView {
    pub label: String,
    pub positions: Vec<usize>,
    pub code: Arc<BsrsNode>,
}

/// The native cover of a node in its own coordinates: a single trivial view
/// for a base case, otherwise one view per column label and per row.
pub fn native_cover(node: &Arc<BsrsNode>) -> Vec<CoverView> {
    let f = node.field();
    let Some(col_child) = node.col_child() else {
        return vec![CoverView { label: "self".into(), positions: (0..node.len()).collect(), code: node.clone() }];
    };
    let l0p = node.l0_prime().expect("split node has L'_0");
    let mut views = Vec::with_capacity(l0p.len() + node.rows().len());
    for (ai, &alpha) in l0p.elements().iter().enumerate() {
        views.push(CoverView {
            label: format!("col:α={}", f.format(alpha)),
            positions: (0..col_child.len()).map(|x| node.col_embed(ai, x)).collect(),
            code: col_child.clone(),
        });
    }
    for (bi, row) in node.rows().iter().enumerate() {
        let child = &node.row_children()[bi];
        views.push(CoverView {
            label: format!("row:β={}", f.format(row.beta)),
            positions: (0..child.len()).map(|x| node.row_embed(bi, x)).collect(),
            code: child.clone(),
        });
    }
    views
}

/// A vertex of the recursive cover, with positions in root coordinates.
#[derive(Clone, Debug)]
pub struct CoverVertex {
    pub view: CoverView,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Equidepth tree of views obtained by applying the native cover at every
/// vertex; base-case vertices above the last layer get one trivial child.
#[derive(Clone, Debug)]
pub struct RecursiveCover {
    layers: Vec<Vec<CoverVertex>>,
}

pub fn recursive_cover(root: &Arc<BsrsNode>) -> RecursiveCover {
    let depth = root.depth().max(1);
    let mut layers = vec![vec![CoverVertex {
        view: CoverView { label: "root".into(), positions: (0..root.len()).collect(), code: root.clone() },
        parent: None,
        children: Vec::new(),
    }]];
    for d in 0..depth {
        let mut next = Vec::new();
        for (vi, v) in layers[d].iter_mut().enumerate() {
            for child in native_cover(&v.view.code) {
                let positions = child.positions.iter().map(|&x| v.view.positions[x]).collect();
                let label = if v.parent.is_none() { child.label } else { format!("{}/{}", v.view.label, child.label) };
                v.children.push(next.len());
                next.push(CoverVertex {
                    view: CoverView { label, positions, code: child.code },
                    parent: Some(vi),
                    children: Vec::new(),
                });
            }
        }
        layers.push(next);
    }
    RecursiveCover { layers }
}

impl RecursiveCover {
    /// Number of edges on every root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, d: usize) -> &[CoverVertex] {
        &self.layers[d]
    }

    pub fn layers(&self) -> &[Vec<CoverVertex>] {
        &self.layers
    }

    /// Whether `(d1, i1)` is an ancestor of `(d2, i2)` or equal to it.
    fn is_ancestor(&self, (d1, i1): (usize, usize), (mut d2, mut i2): (usize, usize)) -> bool {
        while d2 > d1 {
            i2 = self.layers[d2][i2].parent.expect("non-root vertex has a parent");
            d2 -= 1;
        }
        d2 == d1 && i2 == i1
    }

    /// Largest intersection between two vertices neither of which is an
    /// ancestor of the other.
    pub fn max_disconnected_intersection(&self) -> usize {
        let all: Vec<((usize, usize), BTreeSet<usize>)> = self
            .layers
            .iter()
            .enumerate()
            .flat_map(|(d, layer)| {
                layer.iter().enumerate().map(move |(i, v)| ((d, i), v.view.positions.iter().copied().collect()))
            })
            .collect();
        let mut worst = 0;
        for (a, (va, sa)) in all.iter().enumerate() {
            for (vb, sb) in &all[a + 1..] {
                if self.is_ancestor(*va, *vb) || self.is_ancestor(*vb, *va) {
                    continue;
                }
                worst = worst.max(sa.intersection(sb).count());
            }
        }
        worst
    }

    /// Whether every internal vertex's children cover its positions.
    pub fn children_cover_parents(&self) -> bool {
        self.layers[..self.depth()].iter().enumerate().all(|(d, layer)| {
            layer.iter().all(|v| {
                let union: BTreeSet<usize> =
                    v.children.iter().flat_map(|&c| self.layers[d + 1][c].view.positions.iter().copied()).collect();
                let own: BTreeSet<usize> = v.view.positions.iter().copied().collect();
                union == own
            })
        })
    }
}

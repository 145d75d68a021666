use std::collections::HashMap;

use crate::algebra::{Fe, Field, UniPoly};

use super::BsrsError;

/// `g(X, Y) = sum coeffs[i][j] X^i Y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariatePoly {
    pub coeffs: Vec<Vec<Fe>>,
}

impl BivariatePoly {
    pub fn eval(&self, f: &Field, x: Fe, y: Fe) -> Fe {
        self.coeffs.iter().rev().fold(f.zero(), |acc, row| {
            let inner = row.iter().rev().fold(f.zero(), |a, &c| f.add(f.mul(a, y), c));
            f.add(f.mul(acc, x), inner)
        })
    }

    /// `g(alpha, Y)`.
    pub fn column(&self, f: &Field, alpha: Fe) -> UniPoly {
        let dy = self.coeffs.first().map_or(0, Vec::len);
        UniPoly::new(
            (0..dy).map(|j| self.coeffs.iter().rev().fold(f.zero(), |a, row| f.add(f.mul(a, alpha), row[j]))).collect(),
        )
    }

    /// `g(X, beta)`.
    pub fn row(&self, f: &Field, beta: Fe) -> UniPoly {
        UniPoly::new(
            self.coeffs.iter().map(|row| row.iter().rev().fold(f.zero(), |a, &c| f.add(f.mul(a, beta), c))).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.0 == 0)
    }
}

/// Constraints for [`bivariate_extend`].
#[derive(Clone, Debug, Default)]
pub struct ExtendConstraints {
    /// `g(alpha, Y) = p(Y)`.
    pub columns: Vec<(Fe, UniPoly)>,
    /// `g(X, beta) = p(X)`.
    pub rows: Vec<(Fe, UniPoly)>,
    /// `g(alpha, beta) = v`.
    pub points: Vec<(Fe, Fe, Fe)>,
}

fn grid_axis(f: &Field, mut chosen: Vec<Fe>, size: usize) -> Vec<Fe> {
    let mut it = f.elements();
    while chosen.len() < size {
        let x = it.next().expect("field has enough elements");
        if !chosen.contains(&x) {
            chosen.push(x);
        }
    }
    chosen
}

/// A bivariate polynomial with `deg_X < d_rows` and `deg_Y < d_cols` that
/// matches the given columns, rows and points. Grid cells not fixed by a
/// constraint are set to zero.
pub fn bivariate_extend(
    f: &Field,
    c: &ExtendConstraints,
    d_rows: usize,
    d_cols: usize,
) -> Result<BivariatePoly, BsrsError> {
    let budget = d_rows.min(d_cols);
    if c.columns.len() + c.rows.len() + c.points.len() > budget {
        return Err(BsrsError::OverConstrained { budget });
    }
    if c.columns.iter().any(|(_, p)| p.degree().is_some_and(|d| d >= d_cols))
        || c.rows.iter().any(|(_, p)| p.degree().is_some_and(|d| d >= d_rows))
    {
        return Err(BsrsError::NotLowDegree { bound: budget });
    }
    if (d_rows.max(d_cols) as u64) > f.order() {
        return Err(BsrsError::Invalid("degree bound exceeds the field size".into()));
    }
    let mut xs: Vec<Fe> = Vec::new();
    for a in c.columns.iter().map(|c| c.0).chain(c.points.iter().map(|p| p.0)) {
        if !xs.contains(&a) {
            xs.push(a);
        }
    }
    let mut ys: Vec<Fe> = Vec::new();
    for b in c.rows.iter().map(|r| r.0).chain(c.points.iter().map(|p| p.1)) {
        if !ys.contains(&b) {
            ys.push(b);
        }
    }
    let xs = grid_axis(f, xs, d_rows);
    let ys = grid_axis(f, ys, d_cols);
    let cols: HashMap<Fe, &UniPoly> = c.columns.iter().map(|(a, p)| (*a, p)).collect();
    let rows: HashMap<Fe, &UniPoly> = c.rows.iter().map(|(b, p)| (*b, p)).collect();
    let mut grid = vec![vec![f.zero(); ys.len()]; xs.len()];
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let mut vals = Vec::new();
            if let Some(p) = cols.get(&x) {
                vals.push(p.eval(f, y));
            }
            if let Some(p) = rows.get(&y) {
                vals.push(p.eval(f, x));
            }
            vals.extend(c.points.iter().filter(|p| p.0 == x && p.1 == y).map(|p| p.2));
            if vals.windows(2).any(|w| w[0] != w[1]) {
                return Err(BsrsError::Inconsistent);
            }
            grid[i][j] = vals.first().copied().unwrap_or(f.zero());
        }
    }
    // interpolate along Y for each x, then along X for each Y-coefficient
    let col_polys: Vec<Vec<Fe>> = grid
        .iter()
        .map(|vals| {
            let pts: Vec<(Fe, Fe)> = ys.iter().copied().zip(vals.iter().copied()).collect();
            UniPoly::interpolate(f, &pts).map(|p| p.padded(d_cols))
        })
        .collect::<Result<_, _>>()?;
    let mut coeffs = vec![vec![f.zero(); d_cols]; d_rows];
    for j in 0..d_cols {
        let pts: Vec<(Fe, Fe)> = xs.iter().copied().zip(col_polys.iter().map(|p| p[j])).collect();
        let px = UniPoly::interpolate(f, &pts)?.padded(d_rows);
        for (i, c) in px.into_iter().enumerate() {
            coeffs[i][j] = c;
        }
    }
    let g = BivariatePoly { coeffs };
    let ok = c.columns.iter().all(|(a, p)| g.column(f, *a).padded(d_cols) == p.padded(d_cols))
        && c.rows.iter().all(|(b, p)| g.row(f, *b).padded(d_rows) == p.padded(d_rows))
        && c.points.iter().all(|&(a, b, v)| g.eval(f, a, b) == v);
    if !ok {
        return Err(BsrsError::Inconsistent);
    }
    Ok(g)
}

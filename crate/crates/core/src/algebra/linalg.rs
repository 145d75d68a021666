//! Dense Gaussian elimination over a [`Field`].

use super::field::{Fe, Field};

/// Reduces `rows` to reduced row-echelon form in place, drops zero rows and
/// returns the pivot column of each remaining row.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Fe>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != f.zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == f.zero() {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<Fe>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{ x : M x = 0 }` for an `nrows x ncols` matrix, in reduced
/// row-echelon form.
pub fn nullspace(f: &Field, m: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut rows: Vec<Vec<Fe>> = m.to_vec();
    let pivots = rref(f, &mut rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = f.neg(row[free]);
        }
        basis.push(v);
    }
    rref(f, &mut basis);
    basis
}

/// Basis of `{ y : y^T M = 0 }`, in reduced row-echelon form.
pub fn left_nullspace(f: &Field, m: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    nullspace(f, &transpose(m, ncols), m.len())
}

pub fn transpose(m: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    (0..ncols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}

/// Some solution of `M x = b`, or `None` when inconsistent.
pub fn solve(f: &Field, m: &[Vec<Fe>], b: &[Fe], ncols: usize) -> Option<Vec<Fe>> {
    let mut aug: Vec<Vec<Fe>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![f.zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols];
    }
    Some(x)
}

/// Whether two sets of vectors span the same space.
pub fn same_span(f: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> bool {
    let mut ra = a.to_vec();
    let mut rb = b.to_vec();
    rref(f, &mut ra);
    rref(f, &mut rb);
    ra == rb
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u64]) -> Vec<Fe> {
        xs.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn rref_and_rank() {
        let f = Field::prime(5).unwrap();
        let mut m = vec![v(&[1, 2, 3]), v(&[2, 4, 1]), v(&[3, 1, 0])];
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(m, vec![v(&[1, 2, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = Field::prime(7).unwrap();
        let m = vec![v(&[1, 2, 3, 4]), v(&[0, 1, 5, 6])];
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for row in &m {
                assert_eq!(f.dot(row, x), Fe(0));
            }
        }
        let lns = left_nullspace(&f, &[v(&[1, 2]), v(&[2, 4]), v(&[0, 1])], 2);
        assert_eq!(lns, vec![v(&[1, 3, 0])]);
    }

    #[test]
    fn solve_consistent_and_not() {
        let f = Field::prime(5).unwrap();
        let m = vec![v(&[1, 1]), v(&[1, 4])];
        let x = solve(&f, &m, &v(&[2, 0]), 2).unwrap();
        assert_eq!(f.dot(&m[0], &x), Fe(2));
        assert_eq!(f.dot(&m[1], &x), Fe(0));
        assert!(solve(&f, &[v(&[1, 1]), v(&[2, 2])], &v(&[1, 1]), 2).is_none());
    }
}

//! Row-major Gaussian elimination for the dense storage path.

use crate::field::{Field, Scalar};

/// Reduced row echelon form with leftmost pivots; returns pivot columns.
pub(crate) fn rref(field: Field, rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&y.mul(&factor));
                }
            }
        }
        let _ = field;
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank(field: Field, mut rows: Vec<Vec<Scalar>>, cols: usize) -> usize {
    rref(field, &mut rows, cols).len()
}

/// Canonical kernel basis: one vector per free column `j`, with a 1 at `j`
/// and zeros at every other free column.
pub(crate) fn kernel(field: Field, mut rows: Vec<Vec<Scalar>>, cols: usize) -> Vec<Vec<Scalar>> {
    let pivots = rref(field, &mut rows, cols);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut x = vec![field.zero(); cols];
            x[j] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = rows[r][j].neg();
            }
            x
        })
        .collect()
}

/// Solution supported on pivot columns, or `None` when inconsistent.
pub(crate) fn solve(field: Field, rows: Vec<Vec<Scalar>>, cols: usize, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut aug: Vec<Vec<Scalar>> = rows
        .into_iter()
        .zip(rhs.iter())
        .map(|(mut row, b)| {
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(field, &mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

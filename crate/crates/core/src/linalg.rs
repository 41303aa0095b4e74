//! Dense Gaussian elimination over `F_{q^n}` (and hence over any subfield).

use crate::gf::{FieldCtx, FieldElem};

pub type Matrix = Vec<Vec<FieldElem>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        FieldElem::ONE
                    } else {
                        FieldElem::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

/// Reduces `rows` in place to row echelon form and returns the rank.
fn eliminate(ctx: &FieldCtx, rows: &mut [Vec<FieldElem>], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ctx.inv_nz(rows[rank][col]);
        for v in rows[rank].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = ctx.sub(*v, ctx.mul(factor, pv));
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank(ctx: &FieldCtx, m: &Matrix) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rows = m.clone();
    eliminate(ctx, &mut rows, cols)
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(ctx: &FieldCtx, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut rows: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().copied().chain(id).collect())
        .collect();
    if eliminate(ctx, &mut rows, n) < n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `m · x = rhs` for a nonsingular square `m`.
pub fn solve(ctx: &FieldCtx, m: &Matrix, rhs: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let n = m.len();
    let mut rows: Matrix = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| row.iter().copied().chain(std::iter::once(b)).collect())
        .collect();
    if eliminate(ctx, &mut rows, n) < n {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n]).collect())
}

pub fn mul(ctx: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| ctx.sum((0..inner).map(|k| ctx.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

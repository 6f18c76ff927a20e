//! Dense rational Gauss-Jordan elimination.
//!
//! Slow but unconditional; serves as the fallback when the modular pipeline
//! cannot settle a matrix and as an independent oracle in tests. Kernels come
//! out in the same echelon shape as the modular path: one vector per free
//! column, 1 at that column, 0 at the other free columns.

use super::rows::IntMatrix;
use crate::rational::Rational;
use num_traits::{One, Zero};

/// Rank and kernel basis over the rationals.
pub fn kernel_exact(m: &IntMatrix) -> (usize, Vec<Vec<Rational>>) {
    let ncols = m.ncols;
    let mut rows: Vec<Vec<Rational>> = m
        .rows
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].clone().recip();
        for x in rows[r][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row[c..].iter_mut().zip(pivot_row[c..].iter()) {
                *x -= &f * pv;
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let basis = free_cols
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &c) in rows.iter().take(r).zip(pivot_cols.iter()) {
                if !row[f].is_zero() {
                    v[c] = -row[f].clone();
                }
            }
            v
        })
        .collect();
    (r, basis)
}

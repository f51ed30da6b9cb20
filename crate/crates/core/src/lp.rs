//! A small dense simplex for `max c.x` subject to `A x <= b`, `x >= 0`,
//! with `b >= 0` so the slack basis is feasible from the start.

use crate::error::{Error, Result};

const TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Solve with Bland's rule, which cannot cycle.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = b.len();
    if a.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::input("constraint matrix has inconsistent shape"));
    }
    if b.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::input("right-hand sides must be nonnegative"));
    }
    let width = n + m + 1;
    let mut t = vec![0.0; (m + 1) * width];
    for i in 0..m {
        let row = &mut t[i * width..(i + 1) * width];
        row[..n].copy_from_slice(&a[i]);
        row[n + i] = 1.0;
        row[width - 1] = b[i];
    }
    for j in 0..n {
        t[m * width + j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_PIVOTS {
        let obj = &t[m * width..];
        let Some(enter) = (0..n + m).find(|&j| obj[j] < -TOL) else {
            let mut x = vec![0.0; n];
            for (i, &bi) in basis.iter().enumerate() {
                if bi < n {
                    x[bi] = t[i * width + width - 1].max(0.0);
                }
            }
            let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
            return Ok(LpSolution { x, objective });
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let coef = t[i * width + enter];
            if coef > TOL {
                let ratio = t[i * width + width - 1] / coef;
                let better = match leave {
                    None => true,
                    Some((l, r)) => ratio < r - TOL || (ratio <= r + TOL && basis[i] < basis[l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Unbounded);
        };
        pivot(&mut t, width, r, enter);
        basis[r] = enter;
    }
    Err(Error::Unsupported("simplex did not converge".into()))
}

fn pivot(t: &mut [f64], width: usize, r: usize, col: usize) {
    let p = t[r * width + col];
    for x in &mut t[r * width..(r + 1) * width] {
        *x /= p;
    }
    let pivot_row: Vec<f64> = t[r * width..(r + 1) * width].to_vec();
    let rows = t.len() / width;
    for i in 0..rows {
        if i == r {
            continue;
        }
        let factor = t[i * width + col];
        if factor != 0.0 {
            let row = &mut t[i * width..(i + 1) * width];
            for (x, &pr) in row.iter_mut().zip(&pivot_row) {
                *x -= factor * pr;
            }
            row[col] = 0.0;
        }
    }
}

//! Small dense linear algebra: cyclic Jacobi eigendecomposition for symmetric
//! matrices, a pivoted LU solve, and a leading-eigenvector iteration.
//!
//! Matrices here are at most a few hundred on a side (covariances of asset
//! panels), so the O(n³) Jacobi sweep is accurate and fast enough.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, eigenvalues descending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotation until the off-diagonal mass is negligible.
///
/// Eigenvalues come back sorted in descending order; ties keep the order in
/// which the sweep left them, callers impose their own tie rules.
pub fn symmetric_eigen(a: ArrayView2<f64>) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: a.ncols(),
        });
    }
    // symmetrize so rounding in the caller's covariance cannot bias the result
    let mut m = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (a[[i, j]] + a[[j, i]]));
    let mut v = Array2::<f64>::eye(n);
    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(SymmetricEigen {
            values: Array1::zeros(n),
            vectors: v,
        });
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[[i, j]] * m[[i, j]])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[[p, p]];
                let aqq = m[[q, q]];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                m[[p, q]] = 0.0;
                m[[q, p]] = 0.0;
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[j, j]].total_cmp(&m[[i, i]]));
    let values = Array1::from_iter(order.iter().map(|&i| m[[i, i]]));
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        vectors.column_mut(dst).assign(&v.column(src));
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: ArrayView2<f64>, b: &[f64]) -> Result<Array1<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let mut m = a.to_owned();
    let mut x = Array1::from(b.to_vec());
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[[i, col]].abs().total_cmp(&m[[j, col]].abs()))
            .unwrap_or(col);
        if m[[pivot, col]].abs() <= 1e-14 * scale {
            return Err(Error::RankDeficient {
                requested: n,
                rank: col,
            });
        }
        if pivot != col {
            for k in 0..n {
                m.swap([col, k], [pivot, k]);
            }
            x.swap(col, pivot);
        }
        for row in (col + 1)..n {
            let f = m[[row, col]] / m[[col, col]];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[[row, k]] -= f * m[[col, k]];
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..n).rev() {
        let tail: f64 = ((row + 1)..n).map(|k| m[[row, k]] * x[k]).sum();
        x[row] = (x[row] - tail) / m[[row, row]];
    }
    Ok(x)
}

/// Leading eigenvector of a symmetric PSD matrix: power iteration to get
/// close, then Rayleigh quotient iteration to polish to machine precision.
pub fn leading_eigenvector(a: ArrayView2<f64>) -> Result<(f64, Array1<f64>)> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::EmptyPanel { rows: 0, cols: 0 });
    }
    // deterministic start with weight on every coordinate
    let mut x = Array1::from_iter((0..n).map(|i| 1.0 + 0.1 * i as f64));
    x /= norm(x.as_slice().unwrap_or(&[]));
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let y = a.dot(&x);
        let ny = norm(y.as_slice().unwrap_or(&[]));
        if ny == 0.0 {
            return Ok((0.0, x));
        }
        let next = &y / ny;
        lambda = next.dot(&a.dot(&next));
        let change = (&next - &x).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        x = next;
        if change < 1e-10 {
            break;
        }
    }
    for _ in 0..8 {
        let mut shifted = a.to_owned();
        for i in 0..n {
            shifted[[i, i]] -= lambda;
        }
        let Ok(y) = solve(shifted.view(), x.as_slice().unwrap_or(&[])) else {
            // exact eigenpair makes the shifted system singular
            break;
        };
        let ny = norm(y.as_slice().unwrap_or(&[]));
        if !ny.is_finite() || ny == 0.0 {
            break;
        }
        let mut next = &y / ny;
        if next.dot(&x) < 0.0 {
            next.mapv_inplace(|v| -v);
        }
        let next_lambda = next.dot(&a.dot(&next));
        let done = (&next - &x).iter().fold(0.0_f64, |m, v| m.max(v.abs())) < 1e-15;
        x = next;
        lambda = next_lambda;
        if done {
            break;
        }
    }
    Ok((lambda, x))
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

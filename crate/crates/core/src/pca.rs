//! Principal components: unit-norm weight vectors ordered by variance.
//!
//! [`pca_decompose`] diagonalizes the sample covariance directly.
//! [`pca_deflate`] runs the iterative route (find the top direction, project
//! it out of the residual panel, repeat) and is kept as a cross-check.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::components::{ComponentKind, ComponentSet, DecompositionWarning, Normalization};
use crate::error::{Error, Result};
use crate::linalg::{leading_eigenvector, symmetric_eigen};
use crate::moments::estimate_moments;
use crate::panel::ReturnsMatrix;

/// Eigenvalues at or below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

pub fn pca_decompose(returns: &ReturnsMatrix, k: usize) -> Result<ComponentSet> {
    if k == 0 {
        return Err(Error::InvalidConfig("component count must be at least 1".into()));
    }
    let moments = estimate_moments(returns)?;
    let eig = symmetric_eigen(moments.covariance.view())?;
    let largest = eig.values[0].max(0.0);
    let rank = eig
        .values
        .iter()
        .take_while(|&&v| largest > 0.0 && v > RANK_TOLERANCE * largest)
        .count();

    // eigenvalues arrive descending; runs of ties are ordered by the asset
    // index of each vector's largest-magnitude entry
    let mut order: Vec<usize> = (0..eig.values.len()).collect();
    let mut start = 0;
    while start < order.len() {
        let head = eig.values[start];
        let end = (start..order.len())
            .find(|&i| (head - eig.values[i]).abs() > RANK_TOLERANCE * largest)
            .unwrap_or(order.len());
        order[start..end].sort_by_key(|&i| argmax_abs(eig.vectors.column(i)));
        start = end;
    }

    let keep = k.min(rank);
    let n = returns.n_assets();
    let mut weights = Array2::zeros((keep, n));
    for (row, &src) in order.iter().take(keep).enumerate() {
        let mut v = eig.vectors.column(src).to_owned();
        orient_largest_positive(&mut v);
        weights.row_mut(row).assign(&v);
    }

    let mut set = ComponentSet::from_weights(
        returns,
        weights,
        ComponentKind::Pca,
        Normalization::UnitWeight,
    )?;
    if keep < k {
        log::warn!("requested {k} principal components, rank allows {keep}");
        set.warnings.push(DecompositionWarning::RankDeficient {
            requested: k,
            returned: keep,
        });
    }
    Ok(set)
}

/// Iterative PCA: leading eigenvector of the residual covariance, then deflate.
pub fn pca_deflate(returns: &ReturnsMatrix, k: usize) -> Result<ComponentSet> {
    if k == 0 {
        return Err(Error::InvalidConfig("component count must be at least 1".into()));
    }
    returns.validate(2)?;
    let n = returns.n_assets();
    let mut residual = returns.clone();
    let mut rows: Vec<Array1<f64>> = Vec::with_capacity(k);
    let mut first = None;
    for _ in 0..k.min(n) {
        let cov = estimate_moments(&residual)?.covariance;
        let (lambda, mut v) = leading_eigenvector(cov.view())?;
        let top = *first.get_or_insert(lambda);
        if top <= 0.0 || lambda <= RANK_TOLERANCE * top {
            break;
        }
        orient_largest_positive(&mut v);
        residual = project_residual(&residual, v.as_slice().unwrap_or(&[]))?;
        rows.push(v);
    }
    let mut weights = Array2::zeros((rows.len(), n));
    for (i, v) in rows.iter().enumerate() {
        weights.row_mut(i).assign(v);
    }
    let returned = rows.len();
    let mut set = ComponentSet::from_weights(
        returns,
        weights,
        ComponentKind::Pca,
        Normalization::UnitWeight,
    )?;
    if returned < k {
        set.warnings.push(DecompositionWarning::RankDeficient {
            requested: k,
            returned,
        });
    }
    Ok(set)
}

/// Removes the direction `w` from every row: `X − (X ŵ) ŵᵀ`.
pub fn project_residual(returns: &ReturnsMatrix, w: &[f64]) -> Result<ReturnsMatrix> {
    let norm = crate::linalg::norm(w);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let unit = Array1::from_iter(w.iter().map(|x| x / norm));
    let scores = returns.project(unit.as_slice().unwrap_or(&[]))?;
    let outer = scores
        .insert_axis(Axis(1))
        .dot(&unit.view().insert_axis(Axis(0)));
    let values = &returns.values() - &outer;
    ReturnsMatrix::with_labels(
        values,
        returns.tickers().to_vec(),
        returns.dates().map(<[_]>::to_vec),
    )
}

fn argmax_abs(v: ArrayView1<f64>) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

pub(crate) fn orient_largest_positive(v: &mut Array1<f64>) {
    if v[argmax_abs(v.view())] < 0.0 {
        v.mapv_inplace(|x| -x);
    }
}

//! Independent components by kurtosis maximization.
//!
//! The panel is whitened on its top `k` principal directions, then
//! components are extracted one at a time with the fixed-point update
//! `u ← E[z (uᵀz)³] − 3u`, each new direction kept orthogonal to the ones
//! already found. Components are ordered by descending |excess kurtosis| and
//! rescaled so every series has the variance of the first component when its
//! asset-space weight vector has unit norm.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::components::{
    stats_of_columns, ComponentKind, ComponentSet, DecompositionWarning, Normalization,
};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, symmetric_eigen};
use crate::moments::{estimate_moments, skewness};
use crate::pca::RANK_TOLERANCE;
use crate::panel::ReturnsMatrix;

/// Kurtoses within this distance of zero are treated as Gaussian.
pub const GAUSSIAN_KURTOSIS_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Contrast {
    #[default]
    Kurtosis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcaConfig {
    pub max_iterations: usize,
    /// Convergence when `1 − |⟨u_new, u_old⟩|` drops below this.
    pub tolerance: f64,
    pub restarts: usize,
    pub seed: u64,
    pub contrast: Contrast,
}

impl Default for IcaConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            tolerance: 1e-8,
            restarts: 5,
            seed: 0,
            contrast: Contrast::Kurtosis,
        }
    }
}

impl IcaConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// A whitened panel and the maps between whitened and asset space.
#[derive(Debug, Clone)]
pub struct Whitened {
    /// T×k panel with identity sample covariance.
    pub panel: Array2<f64>,
    pub mean: Array1<f64>,
    /// k×N map: `z = whitening · (x − mean)`.
    pub whitening: Array2<f64>,
    /// N×k map: `x ≈ mean + dewhitening · z`.
    pub dewhitening: Array2<f64>,
}

impl Whitened {
    /// Asset-space weight vector producing the same series as whitened direction `u`.
    pub fn to_asset_weights(&self, u: ArrayView1<f64>) -> Array1<f64> {
        self.whitening.t().dot(&u)
    }
}

pub fn whiten(returns: &ReturnsMatrix, k: usize) -> Result<Whitened> {
    if k == 0 {
        return Err(Error::InvalidConfig("component count must be at least 1".into()));
    }
    let moments = estimate_moments(returns)?;
    let eig = symmetric_eigen(moments.covariance.view())?;
    let largest = eig.values[0];
    let rank = eig
        .values
        .iter()
        .take_while(|&&v| largest > 0.0 && v > RANK_TOLERANCE * largest)
        .count();
    if k > rank {
        return Err(Error::RankDeficient { requested: k, rank });
    }
    let n = returns.n_assets();
    let mut whitening = Array2::zeros((k, n));
    let mut dewhitening = Array2::zeros((n, k));
    for i in 0..k {
        let v = eig.vectors.column(i);
        let s = eig.values[i].sqrt();
        whitening.row_mut(i).assign(&(&v / s));
        dewhitening.column_mut(i).assign(&(&v * s));
    }
    let panel = returns.centered().dot(&whitening.t());
    Ok(Whitened {
        panel,
        mean: moments.mean,
        whitening,
        dewhitening,
    })
}

pub fn ica_decompose(returns: &ReturnsMatrix, k: usize, config: &IcaConfig) -> Result<ComponentSet> {
    config.validate()?;
    if returns.n_periods() < 4 * k {
        return Err(Error::InvalidConfig(format!(
            "ICA needs at least {} periods for {k} components, got {}",
            4 * k,
            returns.n_periods()
        )));
    }
    let white = whiten(returns, k)?;
    let (directions, failed) = fixed_point_deflation(white.panel.view(), k, config);

    // candidate components in extraction order, unit variance each
    let mut candidates: Vec<(f64, Array1<f64>)> = directions
        .iter()
        .map(|u| {
            let series = white.panel.dot(u);
            let kurt = crate::moments::central_moments(series.view());
            let excess = kurt.2 / (kurt.1 * kurt.1) - 3.0;
            (excess, white.to_asset_weights(u.view()))
        })
        .collect();

    let mut warnings: Vec<DecompositionWarning> = failed
        .iter()
        .map(|&component| DecompositionWarning::NoConvergence { component })
        .collect();
    let max_abs_kurtosis = candidates
        .iter()
        .fold(0.0_f64, |m, (kurt, _)| m.max(kurt.abs()));
    if max_abs_kurtosis < GAUSSIAN_KURTOSIS_BAND {
        log::warn!("all ICA candidate kurtoses within ±{GAUSSIAN_KURTOSIS_BAND} of zero");
        warnings.push(DecompositionWarning::GaussianData { max_abs_kurtosis });
    }

    // stable sort keeps extraction order among equal |kurtosis|
    candidates.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));

    let n = returns.n_assets();
    let mut weights = Array2::zeros((k, n));
    for (i, (_, w)) in candidates.iter().enumerate() {
        weights.row_mut(i).assign(w);
    }
    let first_norm = norm(weights.row(0).as_slice().unwrap_or(&[]));
    weights /= first_norm;

    for i in 0..k {
        let series = returns.values().dot(&weights.row(i));
        let skew = skewness(series.view());
        let flip = if skew.abs() < 1e-12 {
            let row = weights.row(i);
            let idx = (0..n)
                .reduce(|best, j| if row[j].abs() > row[best].abs() { j } else { best })
                .unwrap_or(0);
            row[idx] < 0.0
        } else {
            skew < 0.0
        };
        if flip {
            weights.row_mut(i).mapv_inplace(|x| -x);
        }
    }

    let series = returns.values().dot(&weights.t());
    let stats = stats_of_columns(series.view())?;
    Ok(ComponentSet {
        weights,
        series,
        stats,
        kind: ComponentKind::Ica,
        normalization: Normalization::EqualVariance,
        warnings,
    })
}

/// Deflationary fixed-point iteration in whitened space.
///
/// Returns orthonormal directions (one per component) and the indices of
/// components that exhausted every restart without converging.
fn fixed_point_deflation(
    z: ArrayView2<f64>,
    k: usize,
    config: &IcaConfig,
) -> (Vec<Array1<f64>>, Vec<usize>) {
    let dim = z.ncols();
    let t = z.nrows() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut found: Vec<Array1<f64>> = Vec::with_capacity(k);
    let mut failed = Vec::new();

    for component in 0..k {
        let mut best: Option<Array1<f64>> = None;
        let mut converged = false;
        for _ in 0..config.restarts {
            let mut u = Array1::from_iter((0..dim).map(|_| StandardNormal.sample(&mut rng)));
            if !orthonormalize(&mut u, &found) {
                continue;
            }
            for _ in 0..config.max_iterations {
                let y = z.dot(&u);
                let cubed = y.mapv(|v| v * v * v);
                let mut next = z.t().dot(&cubed) / t - &u * 3.0;
                if !orthonormalize(&mut next, &found) {
                    break;
                }
                let cos = dot(
                    next.as_slice().unwrap_or(&[]),
                    u.as_slice().unwrap_or(&[]),
                )
                .abs();
                u = next;
                if 1.0 - cos < config.tolerance {
                    converged = true;
                    break;
                }
            }
            best = Some(u);
            if converged {
                break;
            }
        }
        if !converged {
            failed.push(component);
        }
        let u = best.unwrap_or_else(|| fallback_direction(dim, &found));
        found.push(u);
    }
    (found, failed)
}

/// Gram-Schmidt against `basis` (twice, for precision) and normalize.
/// Returns false if nothing is left.
fn orthonormalize(u: &mut Array1<f64>, basis: &[Array1<f64>]) -> bool {
    for _ in 0..2 {
        for b in basis {
            let c = u.dot(b);
            u.scaled_add(-c, b);
        }
    }
    let len = u.dot(u).sqrt();
    if !(len > 1e-12) {
        return false;
    }
    *u /= len;
    true
}

fn fallback_direction(dim: usize, basis: &[Array1<f64>]) -> Array1<f64> {
    for axis in 0..dim {
        let mut u = Array1::zeros(dim);
        u[axis] = 1.0;
        if orthonormalize(&mut u, basis) {
            return u;
        }
    }
    Array1::zeros(dim)
}

/// Pearson correlations among all PC and IC series, PCs first.
pub fn pc_ic_correlation(pcs: &ComponentSet, ics: &ComponentSet) -> Result<Array2<f64>> {
    if pcs.n_periods() != ics.n_periods() {
        return Err(Error::LengthMismatch(pcs.n_periods(), ics.n_periods()));
    }
    let stacked = ndarray::concatenate(Axis(1), &[pcs.series.view(), ics.series.view()])
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    correlation_matrix(stacked.view())
}

pub(crate) fn correlation_matrix(series: ArrayView2<f64>) -> Result<Array2<f64>> {
    let panel = ReturnsMatrix::new(series.to_owned());
    let cov = estimate_moments(&panel)?.covariance;
    let sd: Vec<f64> = (0..cov.nrows()).map(|i| cov[[i, i]].sqrt()).collect();
    if let Some(i) = sd.iter().position(|&s| s == 0.0) {
        return Err(Error::DegenerateSeries(format!("series {i} is constant")));
    }
    Ok(Array2::from_shape_fn(cov.dim(), |(i, j)| {
        if i == j {
            1.0
        } else {
            (cov[[i, j]] / (sd[i] * sd[j])).clamp(-1.0, 1.0)
        }
    }))
}

/// Normalized Amari index of a square matrix `P = W·A` (unmixing times mixing).
///
/// Zero exactly when `P` is a scaled permutation, at most one otherwise.
pub fn amari_index(p: ArrayView2<f64>) -> f64 {
    let n = p.nrows();
    if n < 2 || p.ncols() != n {
        return 0.0;
    }
    let abs = p.mapv(f64::abs);
    let rows: f64 = abs
        .rows()
        .into_iter()
        .map(|r| r.sum() / r.fold(0.0_f64, |m, &v| m.max(v)) - 1.0)
        .sum();
    let cols: f64 = abs
        .columns()
        .into_iter()
        .map(|c| c.sum() / c.fold(0.0_f64, |m, &v| m.max(v)) - 1.0)
        .sum();
    (rows + cols) / (2.0 * n as f64 * (n as f64 - 1.0))
}

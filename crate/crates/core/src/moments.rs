//! First, second and fourth moments of return panels.
//!
//! Two conventions are fixed throughout the crate:
//!
//! * covariance and volatility use the unbiased `T - 1` normalizer;
//! * excess kurtosis uses population central moments, `m4 / m2² - 3`.
//!
//! The excess-cokurtosis contraction `w·w·K·w·w` has two routes. The
//! production route projects the panel onto `w` and takes moments of the
//! resulting series ([`projected_cokurtosis`]); [`CokurtosisOracle`]
//! materializes the full `N⁴` tensor and exists to cross-check it.

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::ReturnsMatrix;

/// Tensor materialization cap used by [`cokurtosis_tensor`].
pub const DEFAULT_MAX_TENSOR_ASSETS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSummary {
    pub mean: Array1<f64>,
    pub covariance: Array2<f64>,
    pub sample_count: usize,
}

/// Mean, volatility and excess kurtosis of one return series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub mean: f64,
    pub volatility: f64,
    pub excess_kurtosis: f64,
}

pub fn estimate_moments(returns: &ReturnsMatrix) -> Result<MomentSummary> {
    returns.validate(2)?;
    let t = returns.n_periods();
    let mean = returns.column_means();
    let centered = returns.centered();
    let mut covariance = centered.t().dot(&centered) / (t as f64 - 1.0);
    // exact symmetry regardless of summation order
    let n = covariance.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (covariance[[i, j]] + covariance[[j, i]]);
            covariance[[i, j]] = avg;
            covariance[[j, i]] = avg;
        }
    }
    Ok(MomentSummary {
        mean,
        covariance,
        sample_count: t,
    })
}

/// Population central moments `(mean, m2, m4)` of a series.
pub(crate) fn central_moments(series: ArrayView1<f64>) -> (f64, f64, f64) {
    let n = series.len() as f64;
    let mean = series.sum() / n;
    let (m2, m4) = series.iter().fold((0.0, 0.0), |(s2, s4), &x| {
        let d = x - mean;
        let d2 = d * d;
        (s2 + d2, s4 + d2 * d2)
    });
    (mean, m2 / n, m4 / n)
}

/// Population skewness; zero for a constant series.
pub(crate) fn skewness(series: ArrayView1<f64>) -> f64 {
    let n = series.len() as f64;
    let mean = series.sum() / n;
    let (m2, m3) = series.iter().fold((0.0, 0.0), |(s2, s3), &x| {
        let d = x - mean;
        (s2 + d * d, s3 + d * d * d)
    });
    let (m2, m3) = (m2 / n, m3 / n);
    if m2 <= 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

pub fn series_stats(series: ArrayView1<f64>) -> Result<SeriesStats> {
    let len = series.len();
    if len < 4 {
        return Err(Error::DegenerateSeries(format!(
            "length {len} is below the 4 samples needed for a fourth moment"
        )));
    }
    if let Some(i) = series.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { row: i, col: 0 });
    }
    let (mean, m2, m4) = central_moments(series);
    if m2 <= f64::EPSILON * f64::EPSILON * mean.abs().max(1.0).powi(2) {
        return Err(Error::DegenerateSeries("constant series".into()));
    }
    let volatility = (m2 * len as f64 / (len as f64 - 1.0)).sqrt();
    Ok(SeriesStats {
        mean,
        volatility,
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    })
}

/// `wᵀVw`.
pub fn portfolio_variance(w: &[f64], moments: &MomentSummary) -> Result<f64> {
    let n = moments.mean.len();
    if w.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: w.len(),
        });
    }
    let w = ArrayView1::from(w);
    Ok(w.dot(&moments.covariance.dot(&w)))
}

/// Excess kurtosis of the projected series `w·S_t`.
pub fn portfolio_excess_kurtosis(w: &[f64], returns: &ReturnsMatrix) -> Result<f64> {
    let projected = returns.project(w)?;
    Ok(series_stats(projected.view())?.excess_kurtosis)
}

/// Un-normalized contraction `E[(w·(S−m))⁴] − 3 (wᵀV₀w)²` via projection,
/// with `V₀` the population covariance.
pub fn projected_cokurtosis(w: &[f64], returns: &ReturnsMatrix) -> Result<f64> {
    let projected = returns.project(w)?;
    let (_, m2, m4) = central_moments(projected.view());
    Ok(m4 - 3.0 * m2 * m2)
}

/// Materialized excess-cokurtosis tensor `E[(S−m)⊗⁴] − 3 V₀⊗V₀`.
///
/// `V₀` is the population covariance so that the normalized contraction
/// equals [`portfolio_excess_kurtosis`] exactly.
#[derive(Debug, Clone)]
pub struct CokurtosisOracle {
    n: usize,
    tensor: Vec<f64>,
    population_covariance: Array2<f64>,
    pub max_n: usize,
}

impl CokurtosisOracle {
    pub fn dim(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.tensor[self.offset(i, j, k, l)]
    }

    /// Full contraction `Σ K_ijkl w_i w_j w_k w_l`.
    pub fn contract(&self, w: &[f64]) -> Result<f64> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: w.len(),
            });
        }
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let wijk = w[i] * w[j] * w[k];
                    let base = self.offset(i, j, k, 0);
                    let inner: f64 = (0..n).map(|l| self.tensor[base + l] * w[l]).sum();
                    total += wijk * inner;
                }
            }
        }
        Ok(total)
    }

    /// Contraction divided by `(wᵀV₀w)²`, i.e. the projected excess kurtosis.
    pub fn normalized_contract(&self, w: &[f64]) -> Result<f64> {
        let raw = self.contract(w)?;
        let wv = ArrayView1::from(w);
        let var = wv.dot(&self.population_covariance.dot(&wv));
        if var <= 0.0 {
            return Err(Error::DegenerateSeries("projected variance is zero".into()));
        }
        Ok(raw / (var * var))
    }

    /// Gradient of the raw contraction, `4 Σ_jkl K_ijkl w_j w_k w_l`.
    pub fn contract_gradient(&self, w: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        let base = self.offset(i, j, k, 0);
                        let inner: f64 = (0..n).map(|l| self.tensor[base + l] * w[l]).sum();
                        acc += w[j] * w[k] * inner;
                    }
                }
                4.0 * acc
            })
            .collect()
    }
}

pub fn cokurtosis_tensor(returns: &ReturnsMatrix) -> Result<CokurtosisOracle> {
    cokurtosis_tensor_capped(returns, DEFAULT_MAX_TENSOR_ASSETS)
}

pub fn cokurtosis_tensor_capped(returns: &ReturnsMatrix, max_n: usize) -> Result<CokurtosisOracle> {
    let n = returns.n_assets();
    if n > max_n {
        return Err(Error::TooLarge { n, max_n });
    }
    returns.validate(4)?;
    let t = returns.n_periods() as f64;
    let centered = returns.centered();
    let pop_cov = centered.t().dot(&centered) / t;

    let mut tensor = vec![0.0; n.pow(4)];
    for row in centered.rows() {
        for i in 0..n {
            for j in 0..n {
                let xij = row[i] * row[j];
                for k in 0..n {
                    let xijk = xij * row[k];
                    let base = ((i * n + j) * n + k) * n;
                    for l in 0..n {
                        tensor[base + l] += xijk * row[l];
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let idx = ((i * n + j) * n + k) * n + l;
                    let gaussian = pop_cov[[i, j]] * pop_cov[[k, l]]
                        + pop_cov[[i, k]] * pop_cov[[j, l]]
                        + pop_cov[[i, l]] * pop_cov[[j, k]];
                    tensor[idx] = tensor[idx] / t - gaussian;
                }
            }
        }
    }
    Ok(CokurtosisOracle {
        n,
        tensor,
        population_covariance: pop_cov,
        max_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn duplicate_columns_are_rank_one() {
        let col = vec![0.01, -0.02, 0.03, 0.005, -0.01];
        let r = ReturnsMatrix::from_columns(&[col.clone(), col]).unwrap();
        let m = estimate_moments(&r).unwrap();
        assert_eq!(m.covariance[[0, 1]], m.covariance[[0, 0]]);
        assert_eq!(m.covariance[[1, 1]], m.covariance[[0, 0]]);
    }

    #[test]
    fn constant_column() {
        let r = ReturnsMatrix::from_columns(&[vec![0.5; 6]]).unwrap();
        let m = estimate_moments(&r).unwrap();
        assert_eq!(m.mean[0], 0.5);
        assert_eq!(m.covariance[[0, 0]], 0.0);
    }

    #[test]
    fn too_few_rows() {
        let r = ReturnsMatrix::from_columns(&[vec![0.1]]).unwrap();
        assert!(matches!(estimate_moments(&r), Err(Error::EmptyPanel { .. })));
    }

    #[test]
    fn nan_rejected() {
        let r = ReturnsMatrix::from_columns(&[vec![0.1, f64::NAN, 0.2]]).unwrap();
        assert_eq!(
            estimate_moments(&r),
            Err(Error::NonFiniteInput { row: 1, col: 0 })
        );
    }

    #[test]
    fn rademacher_hits_lower_bound() {
        let s = Array1::from_iter((0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }));
        let stats = series_stats(s.view()).unwrap();
        assert!((stats.excess_kurtosis + 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_series() {
        assert!(series_stats(array![1.0, 1.0, 1.0, 1.0].view()).is_err());
        assert!(series_stats(array![1.0, 2.0, 3.0].view()).is_err());
    }

    #[test]
    fn variance_examples() {
        let m = MomentSummary {
            mean: array![0.0, 0.0],
            covariance: array![[4.0, 0.0], [0.0, 1.0]],
            sample_count: 10,
        };
        assert_eq!(portfolio_variance(&[1.0, 0.0], &m).unwrap(), 4.0);
        assert_eq!(portfolio_variance(&[0.0, 0.0], &m).unwrap(), 0.0);
        let eye = MomentSummary {
            covariance: Array2::eye(2),
            ..m.clone()
        };
        assert_eq!(portfolio_variance(&[0.5, 0.5], &eye).unwrap(), 0.5);
        assert!(matches!(
            portfolio_variance(&[1.0], &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_asset_tensor_collapses() {
        let col = vec![0.3, -1.2, 0.7, 2.5, -0.4, 0.1, -2.0];
        let r = ReturnsMatrix::from_columns(&[col]).unwrap();
        let k = cokurtosis_tensor(&r).unwrap();
        let (_, m2, m4) = central_moments(r.column(0));
        assert!((k.get(0, 0, 0, 0) - (m4 - 3.0 * m2 * m2)).abs() < 1e-12);
    }

    #[test]
    fn tensor_cap() {
        let r = ReturnsMatrix::new(Array2::zeros((10, 9)));
        assert_eq!(
            cokurtosis_tensor(&r).unwrap_err(),
            Error::TooLarge { n: 9, max_n: 8 }
        );
    }
}

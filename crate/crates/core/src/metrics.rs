//! Evaluation metrics for realized portfolio series. Risk-free rate is zero.

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::series_stats;
use crate::portfolio::{sample_volatility, signed_cuberoot, DEFAULT_KURTOSIS_FLOOR};

pub const DEFAULT_ANNUALIZATION: f64 = 252.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DrawdownMode {
    /// Equity curve `Π(1 + r)`.
    #[default]
    Compounded,
    /// Equity curve `1 + Σ r`.
    Additive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub volatility: f64,
    pub sharpe: f64,
    pub excess_kurtosis: f64,
    /// `None` when |excess kurtosis| is below the floor.
    pub fat_tailed_ratio: Option<f64>,
    pub max_drawdown: f64,
    pub correlation_vs: Option<(String, f64)>,
}

fn is_flat(mean: f64, vol: f64) -> bool {
    vol == 0.0 || vol <= 1e-14 * mean.abs()
}

pub fn sharpe_ratio(returns: ArrayView1<f64>, annualization: f64) -> Result<f64> {
    let n = returns.len();
    if n < 2 {
        return Err(Error::ZeroVolatility);
    }
    let mean = returns.sum() / n as f64;
    let vol = sample_volatility(returns);
    if is_flat(mean, vol) {
        return Err(Error::ZeroVolatility);
    }
    Ok(mean / vol * annualization.sqrt())
}

pub fn fat_tailed_ratio(returns: ArrayView1<f64>) -> Result<f64> {
    fat_tailed_ratio_with_floor(returns, DEFAULT_KURTOSIS_FLOOR)
}

pub fn fat_tailed_ratio_with_floor(returns: ArrayView1<f64>, floor: f64) -> Result<f64> {
    let stats = series_stats(returns)?;
    fat_tailed_ratio_from(stats.mean, stats.excess_kurtosis, floor)
}

/// `signed_cuberoot(μ/κ)`.
pub fn fat_tailed_ratio_from(mean: f64, excess_kurtosis: f64, floor: f64) -> Result<f64> {
    if excess_kurtosis.abs() < floor {
        return Err(Error::KurtosisNearZero { floor });
    }
    Ok(signed_cuberoot(mean / excess_kurtosis))
}

pub fn max_drawdown(returns: ArrayView1<f64>) -> f64 {
    max_drawdown_with(returns, DrawdownMode::Compounded)
}

/// Largest fractional decline of the equity curve from its running peak,
/// with the curve starting at 1 before the first return.
pub fn max_drawdown_with(returns: ArrayView1<f64>, mode: DrawdownMode) -> f64 {
    let mut equity = 1.0_f64;
    let mut peak = 1.0_f64;
    let mut worst = 0.0_f64;
    for &r in returns {
        equity = match mode {
            DrawdownMode::Compounded => equity * (1.0 + r),
            DrawdownMode::Additive => equity + r,
        };
        peak = peak.max(equity);
        if peak > 0.0 {
            worst = worst.max(1.0 - equity / peak);
        }
    }
    worst.clamp(0.0, 1.0)
}

pub fn portfolio_correlation(a: ArrayView1<f64>, b: ArrayView1<f64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len() as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::DegenerateSeries("constant series in correlation".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

pub fn metric_report(returns: ArrayView1<f64>, annualization: f64) -> Result<MetricReport> {
    let stats = series_stats(returns)?;
    Ok(MetricReport {
        volatility: stats.volatility,
        sharpe: sharpe_ratio(returns, annualization)?,
        excess_kurtosis: stats.excess_kurtosis,
        fat_tailed_ratio: fat_tailed_ratio_from(
            stats.mean,
            stats.excess_kurtosis,
            DEFAULT_KURTOSIS_FLOOR,
        )
        .ok(),
        max_drawdown: max_drawdown(returns),
        correlation_vs: None,
    })
}

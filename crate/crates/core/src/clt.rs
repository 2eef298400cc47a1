//! Monte Carlo harness for diversification of equal-volatility baskets.
//!
//! Each trial simulates independent sources, mixes them with a random
//! well-conditioned matrix, extracts PCs and ICs, and records the variance
//! and excess kurtosis of `Π(n) = (1/n) Σᵢ₌₁ⁿ componentᵢ/σᵢ` for `n = 1..n_max`.
//! Trials run in parallel; each draws from its own ChaCha stream keyed by
//! `(seed, trial)`, so results do not depend on scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ica::{ica_decompose, IcaConfig};
use crate::moments::series_stats;
use crate::pca::pca_decompose;
use crate::portfolio::{hybrid_portfolio, sample_volatility};
use crate::sources::{generate_sources_with, mix, random_mixing_matrix, SourceFamily};

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltExperimentConfig {
    pub n_max: usize,
    pub n_sources: usize,
    pub source_family: SourceFamily,
    pub periods: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CltExperimentConfig {
    fn default() -> Self {
        Self {
            n_max: 10,
            n_sources: 10,
            source_family: SourceFamily::Laplace,
            periods: 100_000,
            trials: 50,
            seed: 0,
        }
    }
}

impl CltExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::InvalidConfig("n_max must be at least 2".into()));
        }
        if self.n_sources < self.n_max {
            return Err(Error::InvalidConfig("n_sources must be at least n_max".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.periods < 1000 {
            return Err(Error::InvalidConfig("periods must be at least 1000".into()));
        }
        self.source_family.validate()
    }
}

/// Per-trial measurements, indexed by `n − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub var_pc: Vec<f64>,
    pub var_ic: Vec<f64>,
    pub kurt_pc: Vec<f64>,
    pub kurt_ic: Vec<f64>,
}

/// Ensemble mean with a normal-approximation 95% interval (absent for one trial).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

impl Estimate {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        if samples.len() < 2 {
            return Self {
                mean,
                std_error: None,
                ci_low: None,
                ci_high: None,
            };
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        Self {
            mean,
            std_error: Some(se),
            ci_low: Some(mean - Z_95 * se),
            ci_high: Some(mean + Z_95 * se),
        }
    }

    /// True when both intervals exist and `self` lies entirely below `other`.
    pub fn separated_below(&self, other: &Estimate) -> bool {
        matches!((self.ci_high, other.ci_low), (Some(hi), Some(lo)) if hi < lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub var_pc: Estimate,
    pub var_ic: Estimate,
    pub kurt_pc: Estimate,
    pub kurt_ic: Estimate,
}

/// Least-squares line through `(log n, log κ(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub config: CltExperimentConfig,
    pub rows: Vec<ScalingRow>,
    /// `None` when some ensemble-mean kurtosis is not clearly positive.
    pub pc_slope: Option<SlopeFit>,
    pub ic_slope: Option<SlopeFit>,
    pub completed_trials: usize,
    pub failures: Vec<(usize, String)>,
    pub trials: Vec<TrialRecord>,
}

impl ScalingReport {
    pub fn row(&self, n: usize) -> Option<&ScalingRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

pub fn run_clt_experiment(config: &CltExperimentConfig) -> Result<ScalingReport> {
    config.validate()?;
    let outcomes: Vec<(usize, Result<TrialRecord>)> = (0..config.trials)
        .into_par_iter()
        .map(|trial| (trial, run_trial(config, trial)))
        .collect();

    let mut trials = Vec::new();
    let mut failures = Vec::new();
    for (trial, outcome) in outcomes {
        match outcome {
            Ok(record) => trials.push(record),
            Err(e) => {
                log::warn!("trial {trial} failed: {e}");
                failures.push((trial, e.to_string()));
            }
        }
    }
    if trials.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "all {} trials failed",
            config.trials
        )));
    }

    let rows: Vec<ScalingRow> = (1..=config.n_max)
        .map(|n| {
            let pick = |f: fn(&TrialRecord) -> &Vec<f64>| -> Estimate {
                let samples: Vec<f64> = trials.iter().map(|t| f(t)[n - 1]).collect();
                Estimate::from_samples(&samples)
            };
            ScalingRow {
                n,
                var_pc: pick(|t| &t.var_pc),
                var_ic: pick(|t| &t.var_ic),
                kurt_pc: pick(|t| &t.kurt_pc),
                kurt_ic: pick(|t| &t.kurt_ic),
            }
        })
        .collect();

    let pc_slope = fit_kurtosis_slope(&rows, |r| r.kurt_pc);
    let ic_slope = fit_kurtosis_slope(&rows, |r| r.kurt_ic);
    Ok(ScalingReport {
        config: config.clone(),
        rows,
        pc_slope,
        ic_slope,
        completed_trials: trials.len(),
        failures,
        trials,
    })
}

/// Generator stream for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trial(config: &CltExperimentConfig, trial: usize) -> Result<TrialRecord> {
    let mut rng = trial_rng(config.seed, trial);
    let sources =
        generate_sources_with(config.source_family, config.n_sources, config.periods, &mut rng)?;
    let mixing = random_mixing_matrix(config.n_sources, &mut rng);
    let observed = mix(&sources, &mixing);

    let pcs = pca_decompose(&observed, config.n_max)?;
    if pcs.len() < config.n_max {
        return Err(Error::RankDeficient {
            requested: config.n_max,
            rank: pcs.len(),
        });
    }
    let ics = ica_decompose(&observed, config.n_max, &IcaConfig::with_seed(rng.next_u64()))?;

    let mut record = TrialRecord {
        trial,
        var_pc: Vec::with_capacity(config.n_max),
        var_ic: Vec::with_capacity(config.n_max),
        kurt_pc: Vec::with_capacity(config.n_max),
        kurt_ic: Vec::with_capacity(config.n_max),
    };
    for n in 1..=config.n_max {
        let pc = hybrid_portfolio(&pcs, n)?;
        let ic = hybrid_portfolio(&ics, n)?;
        record.var_pc.push(sample_volatility(pc.returns.view()).powi(2));
        record.var_ic.push(sample_volatility(ic.returns.view()).powi(2));
        record
            .kurt_pc
            .push(series_stats(pc.returns.view())?.excess_kurtosis);
        record
            .kurt_ic
            .push(series_stats(ic.returns.view())?.excess_kurtosis);
    }
    Ok(record)
}

/// Fits over `n ≥ 2`; declines when any mean is nonpositive or its interval
/// reaches zero.
fn fit_kurtosis_slope(rows: &[ScalingRow], pick: impl Fn(&ScalingRow) -> Estimate) -> Option<SlopeFit> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= 2)
        .map(|r| {
            let e = pick(r);
            let clearly_positive = e.mean > 0.0 && e.ci_low.is_none_or(|lo| lo > 0.0);
            clearly_positive.then(|| ((r.n as f64).ln(), e.mean.ln()))
        })
        .collect::<Option<Vec<_>>>()?;
    least_squares(&points)
}

pub fn least_squares(points: &[(f64, f64)]) -> Option<SlopeFit> {
    let m = points.len();
    if m < 2 {
        return None;
    }
    let mf = m as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let std_error = if m > 2 {
        let rss: f64 = points
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        (rss / (mf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(SlopeFit {
        slope,
        intercept,
        std_error,
    })
}

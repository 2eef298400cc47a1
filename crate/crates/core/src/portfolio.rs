//! Kelly, fat-tailed, hybrid and combined-objective portfolios.
//!
//! Kelly weights component `i` by `μᵢ/σᵢ²`; the fat-tailed portfolio by the
//! signed cube root of `μᵢ/κᵢ`, so weights grow like performance to the
//! power 1/3 rather than linearly. Both shapes are returned with unit norm;
//! leverage is set afterwards with [`scale_to_target_vol`].

use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::components::{ComponentKind, ComponentSet};
use crate::error::{Error, Result};
use crate::linalg::{norm, solve};
use crate::moments::{cokurtosis_tensor_capped, estimate_moments, CokurtosisOracle, SeriesStats};
use crate::panel::ReturnsMatrix;

/// Components with |excess kurtosis| below this are left out of fat-tailed portfolios.
pub const DEFAULT_KURTOSIS_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpace {
    AssetSpace,
    ComponentSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub values: Vec<f64>,
    pub space: WeightSpace,
    /// Factor applied to the raw formula weights to obtain `values`.
    pub leverage_scale: f64,
    /// Components forced to zero weight (kurtosis below the floor).
    pub excluded: Vec<usize>,
}

impl WeightVector {
    fn unit_normalized(raw: Vec<f64>, space: WeightSpace, excluded: Vec<usize>) -> Result<Self> {
        let len = norm(&raw);
        if len == 0.0 || !len.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            values: raw.iter().map(|v| v / len).collect(),
            space,
            leverage_scale: 1.0 / len,
            excluded,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskAversion {
    pub lambda_var: f64,
    pub nu_kurt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Kelly,
    FatTailed,
    HybridPc,
    HybridIc,
    Combined,
}

/// A realized portfolio return series `Π_t = w·S_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioSeries {
    pub returns: Array1<f64>,
    pub weights: WeightVector,
    pub construction: Construction,
}

impl PortfolioSeries {
    pub fn volatility(&self) -> f64 {
        sample_volatility(self.returns.view())
    }
}

pub(crate) fn sample_volatility(r: ArrayView1<f64>) -> f64 {
    let n = r.len();
    if n < 2 {
        return 0.0;
    }
    let mean = r.sum() / n as f64;
    let ss: f64 = r.iter().map(|x| (x - mean) * (x - mean)).sum();
    (ss / (n as f64 - 1.0)).sqrt()
}

/// `sign(x)·|x|^{1/3}`.
pub fn signed_cuberoot(x: f64) -> f64 {
    if x < 0.0 {
        -(-x).cbrt()
    } else {
        x.cbrt()
    }
}

pub fn kelly_weights(components: &ComponentSet) -> Result<WeightVector> {
    if components.kind != ComponentKind::Pca {
        return Err(Error::WrongKind { expected: "PCA" });
    }
    kelly_weights_from_stats(&components.stats)
}

/// Unit-norm weights proportional to `μᵢ/σᵢ²`.
pub fn kelly_weights_from_stats(stats: &[SeriesStats]) -> Result<WeightVector> {
    let raw = stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.volatility > 0.0 {
                Ok(s.mean / (s.volatility * s.volatility))
            } else {
                Err(Error::ZeroVariance(i))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    WeightVector::unit_normalized(raw, WeightSpace::ComponentSpace, Vec::new())
}

pub fn fat_tailed_weights(components: &ComponentSet) -> Result<WeightVector> {
    if components.kind != ComponentKind::Ica {
        return Err(Error::WrongKind { expected: "ICA" });
    }
    fat_tailed_weights_from_stats(&components.stats, DEFAULT_KURTOSIS_FLOOR)
}

/// Unit-norm weights proportional to `signed_cuberoot(μᵢ/κᵢ)`; components
/// with `|κᵢ| < floor` get zero weight and are listed in `excluded`.
pub fn fat_tailed_weights_from_stats(stats: &[SeriesStats], floor: f64) -> Result<WeightVector> {
    let mut excluded = Vec::new();
    let raw: Vec<f64> = stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.excess_kurtosis.abs() < floor {
                excluded.push(i);
                0.0
            } else {
                signed_cuberoot(s.mean / s.excess_kurtosis)
            }
        })
        .collect();
    if !stats.is_empty() && excluded.len() == stats.len() {
        return Err(Error::KurtosisNearZero { floor });
    }
    for i in &excluded {
        log::warn!("component {i} excluded: |excess kurtosis| below {floor}");
    }
    WeightVector::unit_normalized(raw, WeightSpace::ComponentSpace, excluded)
}

/// Realizes component-space weights as a return series.
pub fn build_portfolio(
    components: &ComponentSet,
    weights: WeightVector,
    construction: Construction,
) -> Result<PortfolioSeries> {
    if weights.values.len() != components.len() {
        return Err(Error::DimensionMismatch {
            expected: components.len(),
            actual: weights.values.len(),
        });
    }
    let returns = components
        .series
        .dot(&ArrayView1::from(weights.values.as_slice()));
    Ok(PortfolioSeries {
        returns,
        weights,
        construction,
    })
}

/// Equal-volatility basket `(1/n) Σᵢ₌₁ⁿ componentᵢ/σᵢ`.
pub fn hybrid_portfolio(components: &ComponentSet, n: usize) -> Result<PortfolioSeries> {
    if n == 0 || n > components.len() {
        return Err(Error::NotEnoughComponents {
            requested: n,
            available: components.len(),
        });
    }
    let mut values = vec![0.0; components.len()];
    for (i, s) in components.stats.iter().take(n).enumerate() {
        if !(s.volatility > 0.0) {
            return Err(Error::ZeroVariance(i));
        }
        values[i] = 1.0 / (n as f64 * s.volatility);
    }
    let construction = match components.kind {
        ComponentKind::Pca => Construction::HybridPc,
        ComponentKind::Ica => Construction::HybridIc,
    };
    let weights = WeightVector {
        values,
        space: WeightSpace::ComponentSpace,
        leverage_scale: 1.0,
        excluded: Vec::new(),
    };
    build_portfolio(components, weights, construction)
}

/// Rescales the series and its weights so the in-sample volatility equals `target_vol`.
pub fn scale_to_target_vol(p: &PortfolioSeries, target_vol: f64) -> Result<PortfolioSeries> {
    if !(target_vol > 0.0) {
        return Err(Error::InvalidConfig("target volatility must be positive".into()));
    }
    let vol = p.volatility();
    if !(vol > 0.0) {
        return Err(Error::ZeroVolatility);
    }
    let factor = target_vol / vol;
    let mut weights = p.weights.clone();
    weights.values.iter_mut().for_each(|v| *v *= factor);
    weights.leverage_scale *= factor;
    Ok(PortfolioSeries {
        returns: &p.returns * factor,
        weights,
        construction: p.construction,
    })
}

/// The quartic penalty `w·w·K·w·w` of the combined objective.
pub trait QuarticTerm {
    fn dim(&self) -> usize;
    fn value(&self, w: &[f64]) -> f64;
    fn gradient(&self, w: &[f64]) -> Vec<f64>;
}

/// Quartic term evaluated on the projected series, no tensor materialized.
#[derive(Debug, Clone)]
pub struct ProjectedQuartic {
    centered: Array2<f64>,
    population_covariance: Array2<f64>,
}

impl ProjectedQuartic {
    pub fn new(returns: &ReturnsMatrix) -> Result<Self> {
        returns.validate(4)?;
        let centered = returns.centered();
        let population_covariance = centered.t().dot(&centered) / returns.n_periods() as f64;
        Ok(Self {
            centered,
            population_covariance,
        })
    }
}

impl QuarticTerm for ProjectedQuartic {
    fn dim(&self) -> usize {
        self.centered.ncols()
    }

    fn value(&self, w: &[f64]) -> f64 {
        let w = ArrayView1::from(w);
        let y = self.centered.dot(&w);
        let m4 = y.iter().map(|v| v.powi(4)).sum::<f64>() / y.len() as f64;
        let var = w.dot(&self.population_covariance.dot(&w));
        m4 - 3.0 * var * var
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let w = ArrayView1::from(w);
        let y = self.centered.dot(&w);
        let cubed = y.mapv(|v| v * v * v);
        let vw = self.population_covariance.dot(&w);
        let var = w.dot(&vw);
        let t = y.len() as f64;
        let grad = self.centered.t().dot(&cubed) * (4.0 / t) - vw * (12.0 * var);
        grad.to_vec()
    }
}

impl QuarticTerm for CokurtosisOracle {
    fn dim(&self) -> usize {
        CokurtosisOracle::dim(self)
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.contract(w).unwrap_or(f64::NAN)
    }

    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        self.contract_gradient(w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub max_iterations: usize,
    /// Stop when `|∇f| < gradient_tolerance · (1 + |f|)`.
    pub gradient_tolerance: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            gradient_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedSolution {
    pub weights: Vec<f64>,
    pub objective: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Local maximizer of `w·m − λ wᵀVw − ν w·w·K·w·w`.
///
/// Gradient ascent with Barzilai-Borwein trial steps and Armijo backtracking,
/// started from the closed-form Kelly solution `(2λ)⁻¹V⁻¹m` (or from zero
/// when `λ = 0`). Experimental: the maximizer's shape depends on the ratio of
/// the two aversions, unlike the Kelly and fat-tailed shapes.
pub fn maximize_combined(
    mean: ArrayView1<f64>,
    covariance: &Array2<f64>,
    quartic: &dyn QuarticTerm,
    aversion: RiskAversion,
    options: OptimizerOptions,
) -> Result<CombinedSolution> {
    let RiskAversion { lambda_var, nu_kurt } = aversion;
    if lambda_var < 0.0 || nu_kurt < 0.0 || (lambda_var == 0.0 && nu_kurt == 0.0) {
        return Err(Error::InvalidConfig(
            "risk aversions must be nonnegative and not both zero".into(),
        ));
    }
    let n = mean.len();
    if covariance.dim() != (n, n) || quartic.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: quartic.dim(),
        });
    }
    let objective = |w: &[f64]| {
        let wv = ArrayView1::from(w);
        wv.dot(&mean) - lambda_var * wv.dot(&covariance.dot(&wv)) - nu_kurt * quartic.value(w)
    };
    let gradient = |w: &[f64]| -> Vec<f64> {
        let wv = ArrayView1::from(w);
        let vw = covariance.dot(&wv);
        let q = if nu_kurt > 0.0 {
            quartic.gradient(w)
        } else {
            vec![0.0; n]
        };
        (0..n)
            .map(|i| mean[i] - 2.0 * lambda_var * vw[i] - nu_kurt * q[i])
            .collect()
    };

    let mut w = if lambda_var > 0.0 {
        match solve(covariance.view(), mean.as_slice().unwrap_or(&mean.to_vec())) {
            Ok(x) => x.iter().map(|v| v / (2.0 * lambda_var)).collect(),
            Err(_) => vec![0.0; n],
        }
    } else {
        vec![0.0; n]
    };
    let mut f = objective(&w);
    let mut g = gradient(&w);
    let mut step = 1.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut iterations = 0;

    for iteration in 0..options.max_iterations {
        iterations = iteration;
        let gnorm = norm(&g);
        if gnorm < options.gradient_tolerance * (1.0 + f.abs()) {
            return Ok(CombinedSolution {
                weights: w,
                objective: f,
                gradient_norm: gnorm,
                iterations: iteration,
                converged: true,
            });
        }
        if let Some((pw, pg)) = &prev {
            let s: Vec<f64> = w.iter().zip(pw).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = pg.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
            let ss: f64 = s.iter().map(|a| a * a).sum();
            if sy > 0.0 && ss > 0.0 {
                step = ss / sy;
            }
        }
        // the quartic term can be indefinite, so the objective may be unbounded
        // far away; capping each move keeps ascent in the starting basin
        let radius = 0.5 * norm(&w).max(1e-8);
        if step * gnorm > radius {
            step = radius / gnorm;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = w.iter().zip(&g).map(|(x, d)| x + step * d).collect();
            let ft = objective(&trial);
            if ft.is_finite() && ft >= f + 1e-4 * step * gnorm * gnorm {
                prev = Some((std::mem::replace(&mut w, trial), g.clone()));
                f = ft;
                g = gradient(&w);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        if unbounded_along_ray(&w, mean, covariance, quartic, aversion) {
            log::warn!("combined objective is unbounded above; quartic term is negative along the ascent ray");
            break;
        }
    }
    let gnorm = norm(&g);
    log::warn!("combined objective did not reach gradient tolerance (|g| = {gnorm:e})");
    Ok(CombinedSolution {
        weights: w,
        objective: f,
        gradient_norm: gnorm,
        iterations: iterations + 1,
        converged: gnorm < options.gradient_tolerance * (1.0 + f.abs()),
    })
}

/// Along `d = w/|w|` the objective is `a t − b t² + c t⁴`. With `c > 0`, a
/// positive slope and positive curvature at `t = |w|` persist for all larger
/// `t`, so the objective increases without bound.
fn unbounded_along_ray(
    w: &[f64],
    mean: ArrayView1<f64>,
    covariance: &Array2<f64>,
    quartic: &dyn QuarticTerm,
    aversion: RiskAversion,
) -> bool {
    let t = norm(w);
    if t == 0.0 || aversion.nu_kurt == 0.0 {
        return false;
    }
    let d: Vec<f64> = w.iter().map(|v| v / t).collect();
    let dv = ArrayView1::from(d.as_slice());
    let a = dv.dot(&mean);
    let b = aversion.lambda_var * dv.dot(&covariance.dot(&dv));
    let c = -aversion.nu_kurt * quartic.value(&d);
    c > 0.0 && a - 2.0 * b * t + 4.0 * c * t.powi(3) > 0.0 && -2.0 * b + 12.0 * c * t * t > 0.0
}

/// Combined-objective weights over the columns of `returns` (assets, or
/// component series via [`ComponentSet::series_matrix`]).
pub fn combined_weights(
    returns: &ReturnsMatrix,
    aversion: RiskAversion,
    options: OptimizerOptions,
) -> Result<(WeightVector, CombinedSolution)> {
    let moments = estimate_moments(returns)?;
    let quartic = ProjectedQuartic::new(returns)?;
    let solution = maximize_combined(
        moments.mean.view(),
        &moments.covariance,
        &quartic,
        aversion,
        options,
    )?;
    if !solution.converged {
        log::warn!("{}", Error::NoConvergence(0));
    }
    let weights = WeightVector {
        values: solution.weights.clone(),
        space: WeightSpace::AssetSpace,
        leverage_scale: 1.0,
        excluded: Vec::new(),
    };
    Ok((weights, solution))
}

/// Same as [`combined_weights`] but evaluates the quartic term on the
/// materialized tensor; only for small panels.
pub fn combined_weights_with_tensor(
    returns: &ReturnsMatrix,
    aversion: RiskAversion,
    options: OptimizerOptions,
    max_n: usize,
) -> Result<CombinedSolution> {
    let moments = estimate_moments(returns)?;
    let tensor = cokurtosis_tensor_capped(returns, max_n)?;
    maximize_combined(
        moments.mean.view(),
        &moments.covariance,
        &tensor,
        aversion,
        options,
    )
}

//! Synthetic non-Gaussian source panels and random mixing matrices.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::ReturnsMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum SourceFamily {
    /// Laplace, excess kurtosis 3.
    Laplace,
    /// Student-t scaled to unit variance, excess kurtosis `6/(dof − 4)`.
    StudentT { dof: f64 },
    /// `(U − G)/√2` with `U` uniform and `G` standard normal; excess kurtosis −0.3.
    UniformMinusGaussianMix,
    /// Log-AR(1) volatility per column with regime-switching local correlations.
    StochasticVol,
    /// Standard normal; the degenerate case for ICA.
    Gaussian,
}

impl SourceFamily {
    /// Population excess kurtosis, where it has a closed form.
    pub fn excess_kurtosis(&self) -> Option<f64> {
        match *self {
            SourceFamily::Laplace => Some(3.0),
            SourceFamily::StudentT { dof } => Some(6.0 / (dof - 4.0)),
            SourceFamily::UniformMinusGaussianMix => Some(-0.3),
            SourceFamily::Gaussian => Some(0.0),
            SourceFamily::StochasticVol => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SourceFamily::StudentT { dof } if !(dof > 4.0) => Err(Error::InvalidDof(dof)),
            _ => Ok(()),
        }
    }
}

// stochastic-volatility parameters
const SV_PERSISTENCE: f64 = 0.97;
const SV_VOL_OF_VOL: f64 = 0.2;
const SV_SWITCH_PROB: f64 = 0.02;
const SV_LOCAL_CORRELATION: f64 = 0.6;

/// `periods × n_sources` panel, each column zero-mean and unit-variance in expectation.
pub fn generate_sources(
    family: SourceFamily,
    n_sources: usize,
    periods: usize,
    seed: u64,
) -> Result<ReturnsMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_sources_with(family, n_sources, periods, &mut rng)
}

pub fn generate_sources_with<R: Rng + ?Sized>(
    family: SourceFamily,
    n_sources: usize,
    periods: usize,
    rng: &mut R,
) -> Result<ReturnsMatrix> {
    family.validate()?;
    if n_sources == 0 || periods == 0 {
        return Err(Error::EmptyPanel {
            rows: periods,
            cols: n_sources,
        });
    }
    let values = match family {
        SourceFamily::Laplace => {
            let scale = std::f64::consts::FRAC_1_SQRT_2;
            Array2::from_shape_simple_fn((periods, n_sources), || laplace(rng, scale))
        }
        SourceFamily::StudentT { dof } => {
            let dist = StudentT::new(dof).map_err(|_| Error::InvalidDof(dof))?;
            let scale = ((dof - 2.0) / dof).sqrt();
            Array2::from_shape_simple_fn((periods, n_sources), || dist.sample(rng) * scale)
        }
        SourceFamily::UniformMinusGaussianMix => {
            let half_width = 3.0_f64.sqrt();
            Array2::from_shape_simple_fn((periods, n_sources), || {
                let u = rng.random_range(-half_width..half_width);
                let g: f64 = StandardNormal.sample(rng);
                (u - g) * std::f64::consts::FRAC_1_SQRT_2
            })
        }
        SourceFamily::Gaussian => {
            Array2::from_shape_simple_fn((periods, n_sources), || StandardNormal.sample(rng))
        }
        SourceFamily::StochasticVol => stochastic_vol(n_sources, periods, rng),
    };
    Ok(ReturnsMatrix::new(values))
}

/// Inverse-CDF Laplace draw with scale `b` (variance `2b²`).
fn laplace<R: Rng + ?Sized>(rng: &mut R, b: f64) -> f64 {
    let u: f64 = rng.random::<f64>() - 0.5;
    let tail = (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE);
    -b * u.signum() * tail.ln()
}

/// Independent log-AR(1) variance per column. Adjacent column pairs share a
/// shock whose correlation flips sign with a two-state Markov regime, so pair
/// correlations measured over any window are snapshots of a moving target
/// while the long-run correlation is zero.
fn stochastic_vol<R: Rng + ?Sized>(n: usize, periods: usize, rng: &mut R) -> Array2<f64> {
    let stationary_var = SV_VOL_OF_VOL * SV_VOL_OF_VOL / (1.0 - SV_PERSISTENCE * SV_PERSISTENCE);
    let mut log_var: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            stationary_var.sqrt() * z
        })
        .collect();
    let mut regime = 1.0_f64;
    let rho = SV_LOCAL_CORRELATION;
    let mut out = Array2::zeros((periods, n));
    for t in 0..periods {
        if rng.random::<f64>() < SV_SWITCH_PROB {
            regime = -regime;
        }
        let shocks: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        for j in 0..n {
            let eta: f64 = StandardNormal.sample(rng);
            log_var[j] = SV_PERSISTENCE * log_var[j] + SV_VOL_OF_VOL * eta;
            let innovation = if j % 2 == 1 {
                regime * rho * shocks[j - 1] + (1.0 - rho * rho).sqrt() * shocks[j]
            } else {
                shocks[j]
            };
            out[[t, j]] = (0.5 * (log_var[j] - 0.5 * stationary_var)).exp() * innovation;
        }
    }
    out
}

/// Haar-like random orthogonal matrix via Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Array2<f64> {
    loop {
        let mut q = Array2::<f64>::from_shape_simple_fn((n, n), || StandardNormal.sample(rng));
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for i in 0..j {
                    let c = q.column(i).dot(&q.column(j));
                    let qi = q.column(i).to_owned();
                    q.column_mut(j).scaled_add(-c, &qi);
                }
            }
            let len = q.column(j).dot(&q.column(j)).sqrt();
            if len < 1e-10 {
                ok = false;
                break;
            }
            q.column_mut(j).mapv_inplace(|v| v / len);
        }
        if ok {
            return q;
        }
    }
}

/// Largest singular value used by [`random_mixing_matrix`]; the smallest is 1.
pub const MAX_MIXING_SINGULAR_VALUE: f64 = 10.0;

/// `Q₁ diag(s) Q₂` with singular values in `[1, 10]`, so the condition number is at most 10.
pub fn random_mixing_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Array2<f64> {
    let q1 = random_orthogonal(n, rng);
    let q2 = random_orthogonal(n, rng);
    let s = Array2::from_diag(&ndarray::Array1::from_shape_simple_fn(n, || {
        rng.random_range(1.0..MAX_MIXING_SINGULAR_VALUE)
    }));
    q1.dot(&s).dot(&q2)
}

/// Observed panel `X = S Aᵀ` for sources `S` (T×n) and mixing `A` (N×n).
pub fn mix(sources: &ReturnsMatrix, mixing: &Array2<f64>) -> ReturnsMatrix {
    ReturnsMatrix::new(sources.values().dot(&mixing.t()))
}

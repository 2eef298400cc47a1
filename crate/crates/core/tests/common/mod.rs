#![allow(dead_code)]

use fattail::sources::{generate_sources, mix, random_mixing_matrix, SourceFamily};
use fattail::ReturnsMatrix;
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_panel(t: usize, n: usize, seed: u64) -> ReturnsMatrix {
    let mut r = rng(seed);
    ReturnsMatrix::new(Array2::from_shape_simple_fn((t, n), || {
        StandardNormal.sample(&mut r)
    }))
}

/// Correlated Gaussian panel `Z L` with a random loading matrix.
pub fn correlated_panel(t: usize, n: usize, seed: u64) -> ReturnsMatrix {
    let mut r = rng(seed);
    let z = Array2::<f64>::from_shape_simple_fn((t, n), || StandardNormal.sample(&mut r));
    let l = Array2::<f64>::from_shape_simple_fn((n, n), || StandardNormal.sample(&mut r));
    ReturnsMatrix::new(z.dot(&l))
}

/// Mixed sources with the mixing matrix used.
pub fn mixed_sources(
    family: SourceFamily,
    n: usize,
    t: usize,
    seed: u64,
) -> (ReturnsMatrix, ReturnsMatrix, Array2<f64>) {
    let sources = generate_sources(family, n, t, seed).unwrap();
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let a = random_mixing_matrix(n, &mut r);
    let x = mix(&sources, &a);
    (sources, x, a)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Population excess kurtosis computed from scratch.
pub fn naive_kurtosis(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2) - 3.0
}

pub fn naive_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)
}

pub fn normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Business-day price CSV driven by Laplace market and Gaussian noise.
pub fn price_csv(n_assets: usize, first: chrono::NaiveDate, days: usize, seed: u64) -> String {
    use chrono::Datelike;
    let mut r = rng(seed);
    let f = generate_sources(SourceFamily::Laplace, 1, days, seed).unwrap();
    let mut prices = vec![50.0; n_assets];
    let mut out = String::from("date");
    for j in 0..n_assets {
        out.push_str(&format!(",T{j}"));
    }
    out.push('\n');
    let mut day = first;
    let mut written = 0;
    while written < days {
        if day.weekday().number_from_monday() <= 5 {
            out.push_str(&day.format("%Y-%m-%d").to_string());
            for (j, p) in prices.iter_mut().enumerate() {
                let beta = 0.5 + 0.1 * j as f64;
                *p *= 1.0 + 0.0004 + 0.01 * beta * f.values()[[written, 0]] + 0.01 * normal(&mut r);
                out.push_str(&format!(",{p}"));
            }
            out.push('\n');
            written += 1;
        }
        day = day.succ_opt().unwrap();
    }
    out
}

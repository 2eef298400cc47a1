//! Mean minus variance minus cokurtosis penalty, across kurtosis aversions.
//! The penalty uses excess cokurtosis, which is negative along near-Gaussian
//! directions, so large aversions can leave the objective unbounded; the
//! solver then stops and reports `converged = false`.
//!
//! cargo run --release --example combined_objective

use fattail::moments::portfolio_excess_kurtosis;
use fattail::portfolio::{combined_weights, OptimizerOptions, RiskAversion};
use fattail::sources::{generate_sources, SourceFamily};

fn main() -> fattail::Result<()> {
    // three unit-variance assets, the first fat-tailed, all with the same mean
    let mut values = generate_sources(SourceFamily::Gaussian, 3, 20_000, 5)?.into_values();
    let fat = generate_sources(SourceFamily::StudentT { dof: 5.0 }, 1, 20_000, 6)?;
    values.column_mut(0).assign(&fat.column(0));
    values.mapv_inplace(|v| 0.05 + v);
    let returns = fattail::ReturnsMatrix::new(values);

    println!("     nu     w1       w2       w3     kurtosis  iterations  converged");
    for nu in [0.0, 100.0, 1_000.0, 10_000.0] {
        let aversion = RiskAversion { lambda_var: 1.0, nu_kurt: nu };
        let (w, sol) = combined_weights(&returns, aversion, OptimizerOptions::default())?;
        let v = &w.values;
        println!(
            "{nu:>7} {:>8.4} {:>8.4} {:>8.4} {:>10.3} {:>8} {:>10}",
            v[0], v[1], v[2],
            portfolio_excess_kurtosis(v, &returns)?,
            sol.iterations,
            sol.converged
        );
    }
    Ok(())
}

//! The materialized cokurtosis tensor against the projected-series kurtosis.
//!
//! cargo run --release --example cokurtosis

use fattail::moments::{cokurtosis_tensor, portfolio_excess_kurtosis};
use fattail::sources::{generate_sources, mix, random_mixing_matrix, SourceFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fattail::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sources = generate_sources(SourceFamily::StudentT { dof: 7.0 }, 3, 5_000, 11)?;
    let returns = mix(&sources, &random_mixing_matrix(3, &mut rng));
    let tensor = cokurtosis_tensor(&returns)?;

    println!("K[0,0,0,0] = {:.5}, K[0,0,1,1] = {:.5}", tensor.get(0, 0, 0, 0), tensor.get(0, 0, 1, 1));
    for w in [[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.3, -0.6, 0.2]] {
        println!(
            "w = {w:?}: tensor {:.10}  projection {:.10}",
            tensor.normalized_contract(&w)?,
            portfolio_excess_kurtosis(&w, &returns)?
        );
    }
    Ok(())
}

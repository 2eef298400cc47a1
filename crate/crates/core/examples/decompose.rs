//! PCA and ICA on a mixed Laplace panel, with the PC/IC correlation matrix.
//!
//! cargo run --release --example decompose

use fattail::ica::{amari_index, ica_decompose, pc_ic_correlation, IcaConfig};
use fattail::pca::pca_decompose;
use fattail::sources::{generate_sources, mix, random_mixing_matrix, SourceFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fattail::Result<()> {
    let n = 4;
    let sources = generate_sources(SourceFamily::Laplace, n, 20_000, 7)?;
    let mixing = random_mixing_matrix(n, &mut ChaCha8Rng::seed_from_u64(7));
    let returns = mix(&sources, &mixing);

    let pcs = pca_decompose(&returns, n)?;
    let ics = ica_decompose(&returns, n, &IcaConfig::with_seed(1))?;

    println!("component   volatility   excess kurtosis");
    for (label, set) in [("PC", &pcs), ("IC", &ics)] {
        for (i, s) in set.stats.iter().enumerate() {
            println!("{label}{:<9} {:>10.4} {:>17.4}", i + 1, s.volatility, s.excess_kurtosis);
        }
    }
    println!(
        "\nAmari index of unmixing x mixing: {:.4}",
        amari_index(ics.weights.dot(&mixing).view())
    );

    let corr = pc_ic_correlation(&pcs, &ics)?;
    println!("\nPC (rows) vs IC (columns) correlation:");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:>7.3}", corr[[i, n + j]])).collect();
        println!("PC{}  {}", i + 1, row.join(" "));
    }
    Ok(())
}

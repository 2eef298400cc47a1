//! Kelly weights on PCs against fat-tailed weights on ICs, both scaled to
//! the same volatility.
//!
//! cargo run --release --example kelly_vs_fat_tailed

use fattail::ica::{ica_decompose, IcaConfig};
use fattail::metrics::{metric_report, portfolio_correlation};
use fattail::moments::SeriesStats;
use fattail::pca::pca_decompose;
use fattail::portfolio::{
    build_portfolio, fat_tailed_weights, fat_tailed_weights_from_stats, kelly_weights,
    kelly_weights_from_stats, scale_to_target_vol, Construction, DEFAULT_KURTOSIS_FLOOR,
};
use fattail::sources::{generate_sources, mix, random_mixing_matrix, SourceFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fattail::Result<()> {
    // two components, equal risk, means 2:1
    let pair = [
        SeriesStats { mean: 0.002, volatility: 0.01, excess_kurtosis: 3.0 },
        SeriesStats { mean: 0.001, volatility: 0.01, excess_kurtosis: 3.0 },
    ];
    let k = kelly_weights_from_stats(&pair)?;
    let f = fat_tailed_weights_from_stats(&pair, DEFAULT_KURTOSIS_FLOOR)?;
    println!("means 2:1 -> Kelly ratio {:.6}, fat-tailed ratio {:.6}", k.values[0] / k.values[1], f.values[0] / f.values[1]);

    // a drifting mixed panel
    let n = 5;
    let mut sources = generate_sources(SourceFamily::Laplace, n, 2_500, 3)?.into_values();
    sources.mapv_inplace(|v| 0.05 + v);
    let mixing = random_mixing_matrix(n, &mut ChaCha8Rng::seed_from_u64(3)) * 0.01;
    let returns = mix(&fattail::ReturnsMatrix::new(sources), &mixing);

    let pcs = pca_decompose(&returns, n)?;
    let ics = ica_decompose(&returns, n, &IcaConfig::with_seed(3))?;
    let kelly = scale_to_target_vol(&build_portfolio(&pcs, kelly_weights(&pcs)?, Construction::Kelly)?, 0.01)?;
    let fat = scale_to_target_vol(&build_portfolio(&ics, fat_tailed_weights(&ics)?, Construction::FatTailed)?, 0.01)?;

    println!("\n{:<11} {:>8} {:>8} {:>9} {:>9}", "portfolio", "vol", "sharpe", "kurtosis", "drawdown");
    for (name, p) in [("kelly", &kelly), ("fat-tailed", &fat)] {
        let m = metric_report(p.returns.view(), 252.0)?;
        println!("{name:<11} {:>8.4} {:>8.3} {:>9.3} {:>9.4}", m.volatility, m.sharpe, m.excess_kurtosis, m.max_drawdown);
    }
    println!("correlation {:.3}", portfolio_correlation(kelly.returns.view(), fat.returns.view())?);
    Ok(())
}

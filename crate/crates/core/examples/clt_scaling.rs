//! Monte Carlo: excess kurtosis of equal-volatility PC and IC baskets as the
//! basket grows.
//!
//! cargo run --release --example clt_scaling [trials]

use fattail::clt::{run_clt_experiment, CltExperimentConfig};
use fattail::sources::SourceFamily;

fn main() -> fattail::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let config = CltExperimentConfig {
        n_max: 8,
        n_sources: 8,
        source_family: SourceFamily::Laplace,
        periods: 50_000,
        trials,
        seed: 1,
    };
    let report = run_clt_experiment(&config)?;

    println!(" n   var PC   var IC   kurt PC            kurt IC");
    for row in &report.rows {
        let ci = |e: &fattail::clt::Estimate| match (e.ci_low, e.ci_high) {
            (Some(lo), Some(hi)) => format!("{:.3} [{lo:.3},{hi:.3}]", e.mean),
            _ => format!("{:.3}", e.mean),
        };
        println!("{:>2} {:>8.4} {:>8.4}   {:<18} {}", row.n, row.var_pc.mean, row.var_ic.mean, ci(&row.kurt_pc), ci(&row.kurt_ic));
    }
    for (name, fit) in [("PC", report.pc_slope), ("IC", report.ic_slope)] {
        match fit {
            Some(f) => println!("{name} log-log slope {:.3} (se {:.3})", f.slope, f.std_error),
            None => println!("{name} slope not fitted: kurtosis not clearly positive"),
        }
    }
    Ok(())
}

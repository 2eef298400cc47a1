//! Sharpe, fat-tailed ratio, drawdown and correlation on two return series.
//!
//! cargo run --release --example metrics

use fattail::metrics::{max_drawdown_with, metric_report, portfolio_correlation, DrawdownMode};
use fattail::sources::{generate_sources, SourceFamily};
use ndarray::Array1;

fn main() -> fattail::Result<()> {
    let s = generate_sources(SourceFamily::Laplace, 2, 1_000, 9)?;
    let a: Array1<f64> = s.column(0).mapv(|v| 0.0005 + 0.01 * v);
    let b: Array1<f64> = (&s.column(0) * 0.6 + &s.column(1) * 0.8).mapv(|v| 0.0003 + 0.01 * v);

    for (name, r) in [("a", &a), ("b", &b)] {
        let m = metric_report(r.view(), 252.0)?;
        println!(
            "{name}: vol {:.4}  sharpe {:.3}  kurtosis {:.3}  fat-tailed ratio {}  drawdown {:.4} (additive {:.4})",
            m.volatility,
            m.sharpe,
            m.excess_kurtosis,
            m.fat_tailed_ratio.map_or("n/a".into(), |v| format!("{v:.4}")),
            m.max_drawdown,
            max_drawdown_with(r.view(), DrawdownMode::Additive),
        );
    }
    println!("correlation {:.3}", portfolio_correlation(a.view(), b.view())?);
    Ok(())
}

//! Loading a price CSV, splitting it into calendar-year buckets with
//! membership fixed before each bucket starts, and running the CLI pipeline.
//!
//! cargo run --release --example buckets

use fattail::data::{bucketize, parse_prices, BucketSpec};

const PRICES: &str = "\
date,AAA,BBB,CCC
2020-12-30,10.0,20.0,
2020-12-31,10.2,19.8,
2021-01-04,10.1,20.4,5.0
2021-01-05,10.4,20.1,5.2
2021-12-30,11.0,21.0,5.5
2021-12-31,11.2,,5.4
2022-01-03,11.1,,5.6
2022-01-04,11.5,,5.5
";

fn main() -> fattail::Result<()> {
    let panel = parse_prices(PRICES)?;
    let specs = BucketSpec::calendar_years(2021, 1, 2);
    for (spec, returns) in specs.iter().zip(bucketize(&panel, &specs)?) {
        println!(
            "{} membership {:?}: {:?}, {} periods",
            spec.label(),
            spec.membership_date(&panel.dates),
            returns.tickers(),
            returns.n_periods()
        );
        for (t, row) in returns.values().rows().into_iter().enumerate() {
            println!("  {}  {row:.4}", returns.dates().map(|d| d[t].to_string()).unwrap_or_default());
        }
    }

    // the same files drive the command-line pipeline
    let dir = std::env::temp_dir().join("fattail-buckets-example");
    std::fs::create_dir_all(&dir)?;
    let input = dir.join("prices.csv");
    std::fs::write(&input, PRICES)?;
    let code = fattail::cli::run([
        "fattail", "decompose", "--input", input.to_str().unwrap(), "--components", "1",
        "--out", dir.join("out").to_str().unwrap(),
    ]);
    println!("decompose exit code {code}, outputs in {}", dir.join("out").display());
    Ok(())
}

//! Command-line pipeline: `decompose`, `portfolio`, `report` and `clt`.
//!
//! Exit codes: 0 success, 1 input or configuration error, 2 numerical
//! failure with partial outputs written.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use rayon::prelude::*;

use crate::clt::{run_clt_experiment, trial_rng, CltExperimentConfig, Estimate, ScalingReport};
use crate::components::{ComponentSet, DecompositionWarning};
use crate::data::{bucketize, load_bucket_specs, load_prices, BucketSpec, PricePanel};
use crate::error::{Error, Result};
use crate::ica::{ica_decompose, pc_ic_correlation, IcaConfig};
use crate::metrics::{metric_report, portfolio_correlation, MetricReport, DEFAULT_ANNUALIZATION};
use crate::output::{read_table, value_as_f64, Cell, OutputFormat, Table};
use crate::panel::ReturnsMatrix;
use crate::pca::pca_decompose;
use crate::portfolio::{
    build_portfolio, fat_tailed_weights, kelly_weights, scale_to_target_vol, Construction,
    PortfolioSeries,
};
use crate::sources::SourceFamily;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fattail", version, about = "PCA/ICA factor portfolios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract PCs and ICs per bucket, with their PC/IC correlation matrix.
    Decompose(PipelineArgs),
    /// Build Kelly and fat-tailed portfolios per bucket at a common volatility.
    Portfolio(PipelineArgs),
    /// Side-by-side metric summary from a `portfolio` output directory.
    Report(ReportArgs),
    /// Monte Carlo scaling of equal-volatility baskets with basket size.
    Clt(CltArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args, Clone)]
pub struct PipelineArgs {
    /// Price CSV: `date,<ticker>,...`.
    #[arg(long)]
    pub input: PathBuf,
    /// JSON list of `{"start": "YYYY-MM-DD", "end": "YYYY-MM-DD"}`; one bucket spanning the panel if absent.
    #[arg(long)]
    pub buckets: Option<PathBuf>,
    #[arg(long = "components", default_value_t = 10)]
    pub components: usize,
    #[arg(long = "target-vol", default_value_t = 0.10)]
    pub target_vol: f64,
    #[arg(long, default_value_t = DEFAULT_ANNUALIZATION)]
    pub annualization: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone)]
pub struct ReportArgs {
    /// Directory written by `portfolio`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ANNUALIZATION)]
    pub annualization: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone)]
pub struct CltArgs {
    /// JSON experiment config; flags below are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "n-max", default_value_t = 10)]
    pub n_max: usize,
    /// Defaults to `n-max`.
    #[arg(long = "n-sources")]
    pub n_sources: Option<usize>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::Laplace)]
    pub family: FamilyArg,
    /// Student-t degrees of freedom.
    #[arg(long, default_value_t = 6.0)]
    pub dof: f64,
    /// Sample length per trial.
    #[arg(long = "T", default_value_t = 100_000)]
    pub periods: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Laplace,
    StudentT,
    UniformMinusGaussian,
    StochasticVol,
    Gaussian,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Portfolio(a) => cmd_portfolio(a),
        Command::Report(a) => cmd_report(a),
        Command::Clt(a) => cmd_clt(a),
    };
    match outcome {
        Ok(Outcome::Complete) => EXIT_OK,
        Ok(Outcome::Partial(problems)) => {
            for p in problems {
                eprintln!("warning: {p}");
            }
            EXIT_NUMERICAL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

#[derive(Debug, PartialEq)]
pub enum Outcome {
    Complete,
    /// Outputs were written but some units of work failed.
    Partial(Vec<String>),
}

impl Outcome {
    fn from_problems(problems: Vec<String>) -> Self {
        if problems.is_empty() {
            Outcome::Complete
        } else {
            Outcome::Partial(problems)
        }
    }
}

struct Bucket {
    label: String,
    returns: ReturnsMatrix,
}

fn load_buckets(args: &PipelineArgs) -> Result<Vec<Bucket>> {
    if args.components == 0 {
        return Err(Error::InvalidConfig("--components must be at least 1".into()));
    }
    if !(args.target_vol > 0.0) {
        return Err(Error::InvalidConfig("--target-vol must be positive".into()));
    }
    let panel = load_prices(&args.input)
        .map_err(|e| Error::Io(format!("{}: {e}", args.input.display())))?;
    let specs = match &args.buckets {
        Some(path) => load_bucket_specs(path)?,
        None => vec![whole_panel_bucket(&panel)?],
    };
    let returns = bucketize(&panel, &specs)?;
    Ok(specs
        .iter()
        .zip(returns)
        .map(|(spec, returns)| Bucket {
            label: spec.label(),
            returns,
        })
        .collect())
}

fn whole_panel_bucket(panel: &PricePanel) -> Result<BucketSpec> {
    match (panel.dates.first(), panel.dates.last()) {
        (Some(&a), Some(&b)) => BucketSpec::new(a, b),
        _ => Err(Error::EmptyPanel {
            rows: 0,
            cols: panel.tickers.len(),
        }),
    }
}

fn prepare_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

struct Decomposition {
    pcs: ComponentSet,
    ics: ComponentSet,
}

/// Per-bucket seeds come from the master seed's stream for that bucket index.
fn decompose_bucket(returns: &ReturnsMatrix, k: usize, seed: u64, index: usize) -> Result<Decomposition> {
    let pcs = pca_decompose(returns, k)?;
    if pcs.len() < k {
        eprintln!(
            "warning: requested {k} components, panel rank allows {}",
            pcs.len()
        );
    }
    let ica_seed = trial_rng(seed, index).next_u64();
    let ics = ica_decompose(returns, pcs.len(), &IcaConfig::with_seed(ica_seed))?;
    Ok(Decomposition { pcs, ics })
}

fn decompose_all(buckets: &[Bucket], k: usize, seed: u64) -> Vec<Result<Decomposition>> {
    buckets
        .par_iter()
        .enumerate()
        .map(|(i, b)| decompose_bucket(&b.returns, k, seed, i))
        .collect()
}

fn component_label(set: &ComponentSet, i: usize) -> String {
    match set.kind {
        crate::ComponentKind::Pca => format!("PC{}", i + 1),
        crate::ComponentKind::Ica => format!("IC{}", i + 1),
    }
}

fn warning_text(w: &DecompositionWarning) -> String {
    match w {
        DecompositionWarning::RankDeficient {
            requested,
            returned,
        } => format!("rank_deficient:{returned}/{requested}"),
        DecompositionWarning::NoConvergence { component } => {
            format!("no_convergence:{}", component + 1)
        }
        DecompositionWarning::GaussianData { .. } => "gaussian_data".into(),
    }
}

fn period_cells(returns: &ReturnsMatrix, t: usize) -> (Cell, Cell) {
    let date = returns
        .dates()
        .and_then(|d| d.get(t))
        .map_or(Cell::Missing, |d| Cell::Text(d.format("%Y-%m-%d").to_string()));
    (Cell::from(t), date)
}

pub fn cmd_decompose(args: &PipelineArgs) -> Result<Outcome> {
    let buckets = load_buckets(args)?;
    let out = &args.common.out;
    let format = OutputFormat::from(args.common.format);
    prepare_out(out)?;

    let mut weights = Table::new("decompose_weights", &["bucket", "component", "asset", "value"]);
    let mut series = Table::new(
        "decompose_series",
        &["bucket", "component", "period", "date", "value"],
    );
    let mut stats = Table::new(
        "decompose_stats",
        &["bucket", "component", "mean", "volatility", "excess_kurtosis"],
    );
    let mut correlation = Table::new("decompose_correlation", &["bucket", "row", "column", "value"]);
    let mut warnings = Table::new("decompose_warnings", &["bucket", "kind", "warning"]);
    let mut problems = Vec::new();

    for (bucket, result) in buckets
        .iter()
        .zip(decompose_all(&buckets, args.components, args.common.seed))
    {
        let d = match result {
            Ok(d) => d,
            Err(e) => {
                problems.push(format!("bucket {}: {e}", bucket.label));
                continue;
            }
        };
        for set in [&d.pcs, &d.ics] {
            for i in 0..set.len() {
                let label = component_label(set, i);
                for (asset, w) in bucket.returns.tickers().iter().zip(set.weight(i)) {
                    weights.push(vec![
                        bucket.label.as_str().into(),
                        label.as_str().into(),
                        asset.as_str().into(),
                        (*w).into(),
                    ]);
                }
                for (t, v) in set.component_series(i).iter().enumerate() {
                    let (period, date) = period_cells(&bucket.returns, t);
                    series.push(vec![
                        bucket.label.as_str().into(),
                        label.as_str().into(),
                        period,
                        date,
                        (*v).into(),
                    ]);
                }
                let s = set.stats[i];
                stats.push(vec![
                    bucket.label.as_str().into(),
                    label.into(),
                    s.mean.into(),
                    s.volatility.into(),
                    s.excess_kurtosis.into(),
                ]);
            }
            for w in &set.warnings {
                let kind = if set.kind == crate::ComponentKind::Pca { "pca" } else { "ica" };
                eprintln!("warning: bucket {} {kind}: {}", bucket.label, warning_text(w));
                warnings.push(vec![
                    bucket.label.as_str().into(),
                    kind.into(),
                    warning_text(w).into(),
                ]);
            }
        }
        match pc_ic_correlation(&d.pcs, &d.ics) {
            Ok(c) => {
                let labels: Vec<String> = (0..d.pcs.len())
                    .map(|i| component_label(&d.pcs, i))
                    .chain((0..d.ics.len()).map(|i| component_label(&d.ics, i)))
                    .collect();
                for ((i, j), v) in c.indexed_iter() {
                    correlation.push(vec![
                        bucket.label.as_str().into(),
                        labels[i].as_str().into(),
                        labels[j].as_str().into(),
                        (*v).into(),
                    ]);
                }
            }
            Err(e) => problems.push(format!("bucket {} correlation: {e}", bucket.label)),
        }
    }

    for table in [&weights, &series, &stats, &correlation, &warnings] {
        table.write(out, format)?;
    }
    Ok(Outcome::from_problems(problems))
}

struct BucketPortfolios {
    kelly: PortfolioSeries,
    fat_tailed: PortfolioSeries,
    kelly_assets: Vec<f64>,
    fat_tailed_assets: Vec<f64>,
    fat_tailed_flags: Vec<String>,
    kelly_flags: Vec<String>,
}

fn build_bucket_portfolios(d: &Decomposition, target_vol: f64) -> Result<BucketPortfolios> {
    let kelly_w = kelly_weights(&d.pcs)?;
    let kelly = scale_to_target_vol(&build_portfolio(&d.pcs, kelly_w, Construction::Kelly)?, target_vol)?;
    let fat_w = fat_tailed_weights(&d.ics)?;
    let fat_tailed = scale_to_target_vol(
        &build_portfolio(&d.ics, fat_w, Construction::FatTailed)?,
        target_vol,
    )?;
    let kelly_assets = d.pcs.to_asset_weights(&kelly.weights.values)?.to_vec();
    let fat_tailed_assets = d.ics.to_asset_weights(&fat_tailed.weights.values)?.to_vec();

    let mut fat_tailed_flags: Vec<String> = d.ics.warnings.iter().map(warning_text).collect();
    fat_tailed_flags.extend(
        fat_tailed
            .weights
            .excluded
            .iter()
            .map(|i| format!("kurtosis_near_zero:IC{}", i + 1)),
    );
    let kelly_flags = d.pcs.warnings.iter().map(warning_text).collect();
    Ok(BucketPortfolios {
        kelly,
        fat_tailed,
        kelly_assets,
        fat_tailed_assets,
        fat_tailed_flags,
        kelly_flags,
    })
}

fn construction_name(c: Construction) -> &'static str {
    match c {
        Construction::Kelly => "kelly",
        Construction::FatTailed => "fat_tailed",
        Construction::HybridPc => "hybrid_pc",
        Construction::HybridIc => "hybrid_ic",
        Construction::Combined => "combined",
    }
}

const METRIC_COLUMNS: [&str; 9] = [
    "bucket",
    "portfolio",
    "volatility",
    "sharpe",
    "excess_kurtosis",
    "fat_tailed_ratio",
    "max_drawdown",
    "correlation_vs_other",
    "flags",
];

fn metric_row(bucket: &str, name: &str, m: &MetricReport, flags: &[String]) -> Vec<Cell> {
    vec![
        bucket.into(),
        name.into(),
        m.volatility.into(),
        m.sharpe.into(),
        m.excess_kurtosis.into(),
        m.fat_tailed_ratio.into(),
        m.max_drawdown.into(),
        m.correlation_vs.as_ref().map(|c| c.1).into(),
        flags.join(";").into(),
    ]
}

pub fn cmd_portfolio(args: &PipelineArgs) -> Result<Outcome> {
    let buckets = load_buckets(args)?;
    let out = &args.common.out;
    let format = OutputFormat::from(args.common.format);
    prepare_out(out)?;

    let mut weights = Table::new(
        "portfolio_weights",
        &["bucket", "portfolio", "space", "name", "value"],
    );
    let mut series = Table::new(
        "portfolio_series",
        &["bucket", "portfolio", "period", "date", "value"],
    );
    let mut metrics = Table::new("portfolio_metrics", &METRIC_COLUMNS);
    let mut problems = Vec::new();

    for (bucket, result) in buckets
        .iter()
        .zip(decompose_all(&buckets, args.components, args.common.seed))
    {
        let built = result.and_then(|d| {
            let p = build_bucket_portfolios(&d, args.target_vol)?;
            Ok((d, p))
        });
        let (d, p) = match built {
            Ok(x) => x,
            Err(e) => {
                problems.push(format!("bucket {}: {e}", bucket.label));
                continue;
            }
        };
        let corr = portfolio_correlation(p.kelly.returns.view(), p.fat_tailed.returns.view());
        let label = bucket.label.as_str();
        for (portfolio, set, assets, flags, other) in [
            (&p.kelly, &d.pcs, &p.kelly_assets, &p.kelly_flags, "fat_tailed"),
            (&p.fat_tailed, &d.ics, &p.fat_tailed_assets, &p.fat_tailed_flags, "kelly"),
        ] {
            let name = construction_name(portfolio.construction);
            for (i, w) in portfolio.weights.values.iter().enumerate() {
                weights.push(vec![
                    label.into(),
                    name.into(),
                    "component".into(),
                    component_label(set, i).into(),
                    (*w).into(),
                ]);
            }
            for (ticker, w) in bucket.returns.tickers().iter().zip(assets) {
                weights.push(vec![
                    label.into(),
                    name.into(),
                    "asset".into(),
                    ticker.as_str().into(),
                    (*w).into(),
                ]);
            }
            for (t, v) in portfolio.returns.iter().enumerate() {
                let (period, date) = period_cells(&bucket.returns, t);
                series.push(vec![label.into(), name.into(), period, date, (*v).into()]);
            }
            match metric_report(portfolio.returns.view(), args.annualization) {
                Ok(mut m) => {
                    m.correlation_vs = corr.as_ref().ok().map(|c| (other.to_owned(), *c));
                    metrics.push(metric_row(label, name, &m, flags));
                }
                Err(e) => problems.push(format!("bucket {label} {name} metrics: {e}")),
            }
            for f in flags {
                eprintln!("note: bucket {label} {name}: {f}");
            }
        }
    }

    for table in [&weights, &series, &metrics] {
        table.write(out, format)?;
    }
    Ok(Outcome::from_problems(problems))
}

pub fn cmd_report(args: &ReportArgs) -> Result<Outcome> {
    let csv_path = args.input.join("portfolio_series.csv");
    let json_path = args.input.join("portfolio_series.json");
    let path = if csv_path.exists() {
        csv_path
    } else if json_path.exists() {
        json_path
    } else {
        return Err(Error::Io(format!(
            "no portfolio_series.csv or portfolio_series.json in {}",
            args.input.display()
        )));
    };
    let rows = read_table(&path)?;

    // (bucket, portfolio) -> returns, in file order
    let mut groups: Vec<((String, String), Vec<f64>)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let text = |k: &str| row.get(k).and_then(|v| v.as_str()).map(str::to_owned);
        let (Some(bucket), Some(portfolio)) = (text("bucket"), text("portfolio")) else {
            return Err(Error::Parse {
                line: i + 2,
                column: 0,
                message: "missing bucket or portfolio".into(),
            });
        };
        let value = row.get("value").and_then(value_as_f64).ok_or(Error::Parse {
            line: i + 2,
            column: 0,
            message: "missing value".into(),
        })?;
        let key = (bucket, portfolio);
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.1.push(value),
            None => groups.push((key, vec![value])),
        }
    }

    let out = &args.common.out;
    let format = OutputFormat::from(args.common.format);
    prepare_out(out)?;
    let mut table = Table::new(
        "report_summary",
        &["bucket", "metric", "kelly", "fat_tailed", "relative_difference"],
    );
    let mut problems = Vec::new();
    let mut buckets: Vec<String> = Vec::new();
    for ((b, _), _) in &groups {
        if !buckets.contains(b) {
            buckets.push(b.clone());
        }
    }
    for bucket in &buckets {
        let find = |name: &str| {
            groups
                .iter()
                .find(|g| &g.0 .0 == bucket && g.0 .1 == name)
                .map(|g| ndarray::Array1::from(g.1.clone()))
        };
        let (Some(kelly), Some(fat)) = (find("kelly"), find("fat_tailed")) else {
            problems.push(format!("bucket {bucket}: missing kelly or fat_tailed series"));
            continue;
        };
        let (mk, mf) = match (
            metric_report(kelly.view(), args.annualization),
            metric_report(fat.view(), args.annualization),
        ) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                problems.push(format!("bucket {bucket}: {e}"));
                continue;
            }
        };
        let corr = portfolio_correlation(kelly.view(), fat.view()).ok();
        let pairs: [(&str, Option<f64>, Option<f64>); 6] = [
            ("volatility", Some(mk.volatility), Some(mf.volatility)),
            ("sharpe", Some(mk.sharpe), Some(mf.sharpe)),
            ("excess_kurtosis", Some(mk.excess_kurtosis), Some(mf.excess_kurtosis)),
            ("fat_tailed_ratio", mk.fat_tailed_ratio, mf.fat_tailed_ratio),
            ("max_drawdown", Some(mk.max_drawdown), Some(mf.max_drawdown)),
            ("correlation", corr, corr),
        ];
        for (metric, k, f) in pairs {
            let rel = match (k, f) {
                (Some(k), Some(f)) if k != 0.0 && metric != "correlation" => Some((f - k) / k.abs()),
                _ => None,
            };
            table.push(vec![
                bucket.as_str().into(),
                metric.into(),
                k.into(),
                f.into(),
                rel.into(),
            ]);
        }
    }
    table.write(out, format)?;
    Ok(Outcome::from_problems(problems))
}

fn clt_config(args: &CltArgs) -> Result<CltExperimentConfig> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        });
    }
    let source_family = match args.family {
        FamilyArg::Laplace => SourceFamily::Laplace,
        FamilyArg::StudentT => SourceFamily::StudentT { dof: args.dof },
        FamilyArg::UniformMinusGaussian => SourceFamily::UniformMinusGaussianMix,
        FamilyArg::StochasticVol => SourceFamily::StochasticVol,
        FamilyArg::Gaussian => SourceFamily::Gaussian,
    };
    Ok(CltExperimentConfig {
        n_max: args.n_max,
        n_sources: args.n_sources.unwrap_or(args.n_max),
        source_family,
        periods: args.periods,
        trials: args.trials,
        seed: args.common.seed,
    })
}

/// Tables written by `clt`: wide per-n, long-format records, and slopes.
pub fn clt_tables(report: &ScalingReport) -> Vec<Table> {
    let mut wide = Table::new(
        "clt_scaling",
        &[
            "n",
            "var_pc",
            "var_ic",
            "kurt_pc",
            "kurt_pc_ci_low",
            "kurt_pc_ci_high",
            "kurt_ic",
            "kurt_ic_ci_low",
            "kurt_ic_ci_high",
        ],
    );
    let mut long = Table::new(
        "clt_records",
        &["n", "portfolio", "statistic", "mean", "std_error", "ci_low", "ci_high"],
    );
    for row in &report.rows {
        wide.push(vec![
            row.n.into(),
            row.var_pc.mean.into(),
            row.var_ic.mean.into(),
            row.kurt_pc.mean.into(),
            row.kurt_pc.ci_low.into(),
            row.kurt_pc.ci_high.into(),
            row.kurt_ic.mean.into(),
            row.kurt_ic.ci_low.into(),
            row.kurt_ic.ci_high.into(),
        ]);
        let entries: [(&str, &str, &Estimate); 4] = [
            ("pc", "variance", &row.var_pc),
            ("ic", "variance", &row.var_ic),
            ("pc", "excess_kurtosis", &row.kurt_pc),
            ("ic", "excess_kurtosis", &row.kurt_ic),
        ];
        for (portfolio, statistic, e) in entries {
            long.push(vec![
                row.n.into(),
                portfolio.into(),
                statistic.into(),
                e.mean.into(),
                e.std_error.into(),
                e.ci_low.into(),
                e.ci_high.into(),
            ]);
        }
    }
    let mut slopes = Table::new(
        "clt_slopes",
        &["portfolio", "slope", "std_error", "intercept", "completed_trials", "failed_trials"],
    );
    for (name, fit) in [("pc", report.pc_slope), ("ic", report.ic_slope)] {
        slopes.push(vec![
            name.into(),
            fit.map(|f| f.slope).into(),
            fit.map(|f| f.std_error).into(),
            fit.map(|f| f.intercept).into(),
            report.completed_trials.into(),
            report.failures.len().into(),
        ]);
    }
    vec![wide, long, slopes]
}

pub fn cmd_clt(args: &CltArgs) -> Result<Outcome> {
    let config = clt_config(args)?;
    config.validate()?;
    let report = run_clt_experiment(&config)?;
    let out = &args.common.out;
    prepare_out(out)?;
    let format = OutputFormat::from(args.common.format);
    for table in clt_tables(&report) {
        table.write(out, format)?;
    }
    let problems = report
        .failures
        .iter()
        .map(|(trial, e)| format!("trial {trial}: {e}"))
        .collect();
    Ok(Outcome::from_problems(problems))
}

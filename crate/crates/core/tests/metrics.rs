mod common;

use fattail::metrics::{
    fat_tailed_ratio, max_drawdown, max_drawdown_with, metric_report, portfolio_correlation,
    sharpe_ratio, DrawdownMode,
};
use ndarray::Array1;
use proptest::prelude::*;

#[test]
fn sharpe_of_known_process() {
    let mut r = common::rng(41);
    let x = Array1::from_shape_simple_fn(100_000, || 0.001 + 0.01 * common::normal(&mut r));
    let s = sharpe_ratio(x.view(), 252.0).unwrap();
    let expected = 0.1 * 252f64.sqrt();
    assert!((s - expected).abs() < 0.05, "{s} vs {expected}");
}

#[test]
fn independent_series_uncorrelated() {
    let mut r = common::rng(42);
    let a = Array1::from_shape_simple_fn(50_000, || common::normal(&mut r));
    let b = Array1::from_shape_simple_fn(50_000, || common::normal(&mut r));
    assert!(portfolio_correlation(a.view(), b.view()).unwrap().abs() < 0.02);
}

#[test]
fn fat_tailed_ratio_cubic_mean_scaling() {
    let mut r = common::rng(43);
    let base = Array1::from_shape_simple_fn(5_000, || {
        let v = common::normal(&mut r);
        0.001 + 0.01 * v * v.abs()
    });
    // shifting the mean by c³-scaled increments scales the ratio by c
    let m = base.mean().unwrap();
    let shifted = &base - m + 8.0 * m;
    let a = fat_tailed_ratio(base.view()).unwrap();
    let b = fat_tailed_ratio(shifted.view()).unwrap();
    assert!(common::rel_close(b, 2.0 * a, 1e-10));
}

#[test]
fn report_fields() {
    let mut r = common::rng(44);
    let x = Array1::from_shape_simple_fn(1_000, || 0.0005 + 0.01 * common::normal(&mut r));
    let m = metric_report(x.view(), 252.0).unwrap();
    assert!(common::rel_close(m.volatility, common::naive_variance(x.as_slice().unwrap()).sqrt(), 1e-12));
    assert!((0.0..=1.0).contains(&m.max_drawdown));
    assert!(m.correlation_vs.is_none());
}

#[test]
fn additive_mode_uses_running_sum() {
    let x = Array1::from(vec![0.5, -1.0, 0.2]);
    assert!((max_drawdown_with(x.view(), DrawdownMode::Additive) - 1.0 / 1.5).abs() < 1e-15);
    assert_eq!(max_drawdown(x.view()), 1.0);
}

proptest! {
    #[test]
    fn sharpe_annualization_is_sqrt(
        xs in prop::collection::vec(-0.05f64..0.05, 3..100),
        a in 1.0f64..400.0,
    ) {
        let x = Array1::from(xs);
        if let Ok(s1) = sharpe_ratio(x.view(), 1.0) {
            let sa = sharpe_ratio(x.view(), a).unwrap();
            prop_assert!((sa - s1 * a.sqrt()).abs() <= 1e-12 * sa.abs().max(1e-12));
        }
    }

    #[test]
    fn leading_zeros_do_not_change_drawdown(
        xs in prop::collection::vec(-0.3f64..0.3, 0..100),
        zeros in 0usize..20,
    ) {
        let mut padded = vec![0.0; zeros];
        padded.extend(&xs);
        let a = max_drawdown(Array1::from(xs).view());
        let b = max_drawdown(Array1::from(padded).view());
        prop_assert_eq!(a, b);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn correlation_bounded_and_symmetric(
        pairs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..60),
    ) {
        let a = Array1::from_iter(pairs.iter().map(|p| p.0));
        let b = Array1::from_iter(pairs.iter().map(|p| p.1));
        if let Ok(c) = portfolio_correlation(a.view(), b.view()) {
            prop_assert!((-1.0..=1.0).contains(&c));
            prop_assert_eq!(c, portfolio_correlation(b.view(), a.view()).unwrap());
        }
    }
}

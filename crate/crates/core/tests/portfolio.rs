mod common;

use fattail::components::ComponentKind;
use fattail::ica::{ica_decompose, IcaConfig};
use fattail::moments::{estimate_moments, SeriesStats};
use fattail::pca::pca_decompose;
use fattail::portfolio::{
    build_portfolio, combined_weights, combined_weights_with_tensor, fat_tailed_weights,
    fat_tailed_weights_from_stats, hybrid_portfolio, kelly_weights, kelly_weights_from_stats,
    scale_to_target_vol, signed_cuberoot, Construction, OptimizerOptions, RiskAversion,
    DEFAULT_KURTOSIS_FLOOR,
};
use fattail::sources::SourceFamily;
use fattail::Error;
use proptest::prelude::*;

fn st(mean: f64, volatility: f64, excess_kurtosis: f64) -> SeriesStats {
    SeriesStats {
        mean,
        volatility,
        excess_kurtosis,
    }
}

#[test]
fn kelly_and_fat_tailed_ratio_eight_to_one() {
    let comps = [st(0.008, 0.02, 2.0), st(0.001, 0.02, 2.0)];
    let k = kelly_weights_from_stats(&comps).unwrap();
    let f = fat_tailed_weights_from_stats(&comps, DEFAULT_KURTOSIS_FLOOR).unwrap();
    assert!((k.values[0] / k.values[1] - 8.0).abs() < 1e-12);
    assert!((f.values[0] / f.values[1] - 2.0).abs() < 1e-12);
    for w in [&k, &f] {
        let len: f64 = w.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((len - 1.0).abs() < 1e-15);
    }
}

#[test]
fn kelly_weight_is_mean_over_variance() {
    let comps = [st(0.01, 0.1, 1.0), st(-0.02, 0.2, 1.0), st(0.0, 0.3, 1.0)];
    let k = kelly_weights_from_stats(&comps).unwrap();
    let raw = [1.0, -0.5, 0.0];
    for (w, r) in k.values.iter().zip(raw) {
        assert!((w / k.leverage_scale - r).abs() < 1e-12);
    }
}

#[test]
fn low_kurtosis_component_excluded() {
    let comps = [st(0.01, 0.1, 3.0), st(0.02, 0.1, 0.01)];
    let f = fat_tailed_weights_from_stats(&comps, DEFAULT_KURTOSIS_FLOOR).unwrap();
    assert_eq!(f.excluded, vec![1]);
    assert_eq!(f.values[1], 0.0);
    let none = [st(0.01, 0.1, 0.01)];
    assert!(fat_tailed_weights_from_stats(&none, DEFAULT_KURTOSIS_FLOOR).is_err());
}

#[test]
fn zero_means_give_zero_vector_error() {
    let comps = [st(0.0, 0.1, 3.0), st(0.0, 0.1, 3.0)];
    assert_eq!(kelly_weights_from_stats(&comps).unwrap_err(), Error::ZeroVector);
    assert_eq!(
        kelly_weights_from_stats(&[st(0.1, 0.0, 1.0)]).unwrap_err(),
        Error::ZeroVariance(0)
    );
}

#[test]
fn kind_checks() {
    let (_, x, _) = common::mixed_sources(SourceFamily::Laplace, 3, 2_000, 31);
    let pcs = pca_decompose(&x, 3).unwrap();
    let ics = ica_decompose(&x, 3, &IcaConfig::with_seed(1)).unwrap();
    assert_eq!(ics.kind, ComponentKind::Ica);
    assert!(matches!(kelly_weights(&ics), Err(Error::WrongKind { .. })));
    assert!(matches!(fat_tailed_weights(&pcs), Err(Error::WrongKind { .. })));
    assert!(kelly_weights(&pcs).is_ok());
    assert!(fat_tailed_weights(&ics).is_ok());
}

#[test]
fn hybrid_of_four_independent_laplace_ics() {
    let (_, x, _) = common::mixed_sources(SourceFamily::Laplace, 4, 100_000, 32);
    let ics = ica_decompose(&x, 4, &IcaConfig::with_seed(2)).unwrap();
    let p = hybrid_portfolio(&ics, 4).unwrap();
    let k = fattail::moments::series_stats(p.returns.view()).unwrap().excess_kurtosis;
    assert!((k - 0.75).abs() < 0.25, "{k}");
    assert_eq!(p.construction, Construction::HybridIc);
    assert!(hybrid_portfolio(&ics, 5).is_err());
    assert!(hybrid_portfolio(&ics, 0).is_err());
}

#[test]
fn scaled_portfolio_hits_target_and_keeps_sharpe() {
    let (_, x, _) = common::mixed_sources(SourceFamily::Laplace, 3, 1_000, 33);
    let pcs = pca_decompose(&x, 3).unwrap();
    let w = kelly_weights(&pcs).unwrap();
    let p = build_portfolio(&pcs, w, Construction::Kelly).unwrap();
    let q = scale_to_target_vol(&p, 0.1).unwrap();
    assert!((common::naive_variance(q.returns.as_slice().unwrap()).sqrt() - 0.1).abs() < 1e-14);
    let s1 = fattail::metrics::sharpe_ratio(p.returns.view(), 252.0).unwrap();
    let s2 = fattail::metrics::sharpe_ratio(q.returns.view(), 252.0).unwrap();
    assert!(common::rel_close(s1, s2, 1e-12));
    assert!(scale_to_target_vol(&p, 0.0).is_err());
}

#[test]
fn combined_with_zero_kurtosis_aversion_is_kelly() {
    let x = common::correlated_panel(400, 4, 34);
    let aversion = RiskAversion {
        lambda_var: 3.0,
        nu_kurt: 0.0,
    };
    let (w, sol) = combined_weights(&x, aversion, OptimizerOptions::default()).unwrap();
    let m = estimate_moments(&x).unwrap();
    let v = nalgebra::DMatrix::from_fn(4, 4, |i, j| m.covariance[[i, j]]);
    let mu = nalgebra::DVector::from_iterator(4, m.mean.iter().cloned());
    let oracle = v.lu().solve(&mu).unwrap() / 6.0;
    for i in 0..4 {
        assert!((w.values[i] - oracle[i]).abs() < 1e-6);
    }
    assert!(sol.converged);
}

#[test]
fn combined_stationarity_and_tensor_path_agree() {
    let (_, x, _) = common::mixed_sources(SourceFamily::Laplace, 3, 3_000, 35);
    let aversion = RiskAversion {
        lambda_var: 1.0,
        nu_kurt: 5.0,
    };
    let (_, projected) = combined_weights(&x, aversion, OptimizerOptions::default()).unwrap();
    let tensor = combined_weights_with_tensor(&x, aversion, OptimizerOptions::default(), 8).unwrap();
    assert!(projected.converged && tensor.converged);
    for (a, b) in projected.weights.iter().zip(&tensor.weights) {
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
    }
    let bad = RiskAversion {
        lambda_var: 0.0,
        nu_kurt: 0.0,
    };
    assert!(combined_weights(&x, bad, OptimizerOptions::default()).is_err());
}

struct Quartic1(f64);

impl fattail::portfolio::QuarticTerm for Quartic1 {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, w: &[f64]) -> f64 {
        self.0 * w[0].powi(4)
    }
    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        vec![4.0 * self.0 * w[0].powi(3)]
    }
}

fn solve_1d(quartic: f64) -> fattail::portfolio::CombinedSolution {
    fattail::portfolio::maximize_combined(
        ndarray::Array1::from(vec![0.1]).view(),
        &ndarray::Array2::from_elem((1, 1), 1.0),
        &Quartic1(quartic),
        RiskAversion {
            lambda_var: 1.0,
            nu_kurt: 1.0,
        },
        OptimizerOptions::default(),
    )
    .unwrap()
}

#[test]
fn negative_quartic_keeps_local_maximum() {
    // 0.1 − 2w + 12w³ = 0 has its smaller positive root near 0.0503
    let sol = solve_1d(-3.0);
    assert!(sol.converged);
    let w = sol.weights[0];
    assert!((0.1 - 2.0 * w + 12.0 * w.powi(3)).abs() < 1e-9);
    assert!(w > 0.05 && w < 0.051);
}

#[test]
fn unbounded_objective_is_flagged() {
    // 0.1 − 2w + 1200w³ > 0 for every w > 0
    let sol = solve_1d(-300.0);
    assert!(!sol.converged);
    assert!(sol.weights[0].abs() < 1.0);
}

proptest! {
    #[test]
    fn cube_root_is_odd_and_inverts_cube(x in -1e6f64..1e6) {
        prop_assert_eq!(signed_cuberoot(-x), -signed_cuberoot(x));
        let c = signed_cuberoot(x);
        prop_assert!((c * c * c - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn weight_shapes_are_scale_invariant(
        means in prop::collection::vec(-0.01f64..0.01, 2..6),
        c in 0.1f64..10.0,
    ) {
        prop_assume!(means.iter().any(|m| m.abs() > 1e-6));
        let a: Vec<SeriesStats> = means.iter().map(|&m| st(m, 0.02, 2.0)).collect();
        let b: Vec<SeriesStats> = means.iter().map(|&m| st(c * m, 0.02, 2.0)).collect();
        for (x, y) in [
            (kelly_weights_from_stats(&a).unwrap(), kelly_weights_from_stats(&b).unwrap()),
            (
                fat_tailed_weights_from_stats(&a, 0.05).unwrap(),
                fat_tailed_weights_from_stats(&b, 0.05).unwrap(),
            ),
        ] {
            for (u, v) in x.values.iter().zip(&y.values) {
                prop_assert!((u - v).abs() < 1e-12);
            }
        }
    }
}

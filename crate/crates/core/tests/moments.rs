mod common;

use fattail::moments::{
    cokurtosis_tensor, cokurtosis_tensor_capped, estimate_moments, portfolio_excess_kurtosis,
    portfolio_variance, series_stats,
};
use fattail::sources::{generate_sources, SourceFamily};
use fattail::{Error, ReturnsMatrix};
use ndarray::Array2;
use proptest::prelude::*;

#[test]
fn independent_normals_have_near_identity_covariance() {
    let x = common::gaussian_panel(10_000, 2, 1);
    let m = estimate_moments(&x).unwrap();
    let bound = 4.0 / (10_000f64).sqrt();
    assert!((m.covariance[[0, 0]] - 1.0).abs() < 2.0 * bound);
    assert!((m.covariance[[1, 1]] - 1.0).abs() < 2.0 * bound);
    assert!(m.covariance[[0, 1]].abs() < bound);
    assert_eq!(m.covariance[[0, 1]], m.covariance[[1, 0]]);
}

#[test]
fn covariance_matches_naive_formula() {
    let x = common::correlated_panel(300, 4, 2);
    let m = estimate_moments(&x).unwrap();
    for i in 0..4 {
        let col = x.column(i).to_vec();
        assert!(common::rel_close(m.covariance[[i, i]], common::naive_variance(&col), 1e-12));
    }
}

#[test]
fn laplace_series_kurtosis_near_three() {
    let s = generate_sources(SourceFamily::Laplace, 1, 200_000, 3).unwrap();
    let k = series_stats(s.column(0)).unwrap().excess_kurtosis;
    assert!((k - 3.0).abs() < 0.3, "{k}");
}

#[test]
fn equal_mix_of_two_laplace_sources_halves_kurtosis() {
    let s = generate_sources(SourceFamily::Laplace, 2, 200_000, 4).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let k = portfolio_excess_kurtosis(&[h, h], &s).unwrap();
    assert!((k - 1.5).abs() < 0.3, "{k}");
}

#[test]
fn gaussian_projection_near_zero_kurtosis() {
    let x = common::gaussian_panel(100_000, 3, 5);
    let k = portfolio_excess_kurtosis(&[0.3, -0.5, 0.8], &x).unwrap();
    assert!(k.abs() < 0.1, "{k}");
}

#[test]
fn kurtosis_matches_naive_population_formula() {
    let x = common::correlated_panel(500, 3, 6);
    let w = [0.2, 0.7, -0.4];
    let y = x.project(&w).unwrap().to_vec();
    let k = portfolio_excess_kurtosis(&w, &x).unwrap();
    assert!(common::rel_close(k, common::naive_kurtosis(&y), 1e-10));
}

#[test]
fn tensor_is_symmetric() {
    let x = common::correlated_panel(200, 3, 7);
    let t = cokurtosis_tensor(&x).unwrap();
    let (a, b, c, d) = (0, 1, 2, 1);
    let v = t.get(a, b, c, d);
    for (i, j, k, l) in [(b, a, c, d), (c, d, a, b), (d, c, b, a), (a, c, b, d)] {
        assert!((t.get(i, j, k, l) - v).abs() < 1e-12 * v.abs().max(1.0));
    }
}

#[test]
fn tensor_gradient_matches_finite_differences() {
    let x = common::correlated_panel(200, 3, 8);
    let t = cokurtosis_tensor(&x).unwrap();
    let w = [0.3, -0.2, 0.5];
    let g = t.contract_gradient(&w);
    let h = 1e-6;
    for i in 0..3 {
        let mut up = w;
        let mut down = w;
        up[i] += h;
        down[i] -= h;
        let fd = (t.contract(&up).unwrap() - t.contract(&down).unwrap()) / (2.0 * h);
        assert!((fd - g[i]).abs() < 1e-6 * g[i].abs().max(1.0), "{fd} vs {}", g[i]);
    }
}

#[test]
fn tensor_size_cap() {
    let x = common::gaussian_panel(50, 9, 9);
    assert_eq!(
        cokurtosis_tensor(&x).unwrap_err(),
        Error::TooLarge { n: 9, max_n: 8 }
    );
    assert!(cokurtosis_tensor_capped(&x, 9).is_ok());
}

#[test]
fn rejects_bad_inputs() {
    let one_row = ReturnsMatrix::new(Array2::from_elem((1, 2), 0.1));
    assert!(estimate_moments(&one_row).is_err());
    let mut v = Array2::from_elem((10, 2), 0.1);
    v[[3, 1]] = f64::NAN;
    assert_eq!(
        estimate_moments(&ReturnsMatrix::new(v)).unwrap_err(),
        Error::NonFiniteInput { row: 3, col: 1 }
    );
    let flat = ndarray::Array1::from_elem(20, 0.5);
    assert!(series_stats(flat.view()).is_err());
}

fn panel_strategy() -> impl Strategy<Value = (ReturnsMatrix, Vec<f64>)> {
    (1usize..6, 20usize..80, any::<u64>()).prop_flat_map(|(n, t, seed)| {
        let x = common::correlated_panel(t, n, seed);
        (Just(x), prop::collection::vec(-2.0f64..2.0, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn variance_scales_quadratically_kurtosis_invariant(
        (x, w) in panel_strategy(),
        c in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
    ) {
        prop_assume!(w.iter().any(|v| v.abs() > 1e-3));
        let m = estimate_moments(&x).unwrap();
        let cw: Vec<f64> = w.iter().map(|v| c * v).collect();
        let v1 = portfolio_variance(&w, &m).unwrap();
        let v2 = portfolio_variance(&cw, &m).unwrap();
        prop_assert!(common::rel_close(v2, c * c * v1, 1e-10));
        let k1 = portfolio_excess_kurtosis(&w, &x).unwrap();
        let k2 = portfolio_excess_kurtosis(&cw, &x).unwrap();
        prop_assert!((k1 - k2).abs() <= 1e-9 * k1.abs().max(1.0));
    }

    #[test]
    fn covariance_is_psd_and_kurtosis_bounded((x, w) in panel_strategy()) {
        prop_assume!(w.iter().any(|v| v.abs() > 1e-3));
        let m = estimate_moments(&x).unwrap();
        prop_assert!(portfolio_variance(&w, &m).unwrap() >= -1e-12);
        prop_assert!(portfolio_excess_kurtosis(&w, &x).unwrap() >= -2.0 - 1e-12);
    }

    #[test]
    fn contraction_equals_projection((x, w) in panel_strategy()) {
        prop_assume!(w.iter().any(|v| v.abs() > 1e-3));
        let t = cokurtosis_tensor(&x).unwrap();
        let a = t.normalized_contract(&w).unwrap();
        let b = portfolio_excess_kurtosis(&w, &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1.0));
    }
}

mod common;

use fattail::components::DecompositionWarning;
use fattail::moments::estimate_moments;
use fattail::pca::{pca_decompose, pca_deflate, project_residual};
use fattail::{Error, ReturnsMatrix};
use ndarray::{array, Array2};
use proptest::prelude::*;

fn nalgebra_eigen(cov: &Array2<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = cov.nrows();
    let eig = nalgebra::SymmetricEigen::new(nalgebra::DMatrix::from_fn(n, n, |i, j| cov[[i, j]]));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&o| eig.eigenvalues[o]).collect();
    let vectors = order
        .iter()
        .map(|&o| (0..n).map(|i| eig.eigenvectors[(i, o)]).collect())
        .collect();
    (values, vectors)
}

#[test]
fn axis_aligned_variances() {
    // columns with variances 4 and 1 and no correlation
    let mut v = Array2::zeros((400, 2));
    for t in 0..400 {
        let a = if t % 2 == 0 { 2.0 } else { -2.0 };
        let b = if (t / 2) % 2 == 0 { 1.0 } else { -1.0 };
        v[[t, 0]] = a;
        v[[t, 1]] = b;
    }
    let set = pca_decompose(&ReturnsMatrix::new(v), 2).unwrap();
    assert_eq!(set.weights.row(0).to_vec(), vec![1.0, 0.0]);
    assert_eq!(set.weights.row(1).to_vec(), vec![0.0, 1.0]);
    let scale = 400.0 / 399.0;
    assert!((set.stats[0].volatility.powi(2) - 4.0 * scale).abs() < 1e-12);
    assert!((set.stats[1].volatility.powi(2) - scale).abs() < 1e-12);
}

#[test]
fn matches_nalgebra_on_five_assets() {
    let x = common::correlated_panel(300, 5, 11);
    let cov = estimate_moments(&x).unwrap().covariance;
    let (values, vectors) = nalgebra_eigen(&cov);
    let set = pca_decompose(&x, 5).unwrap();
    for i in 0..5 {
        let var = set.stats[i].volatility.powi(2);
        assert!(common::rel_close(var, values[i], 1e-10));
        let cos: f64 = set.weights.row(i).iter().zip(&vectors[i]).map(|(a, b)| a * b).sum();
        assert!(cos.abs() > 1.0 - 1e-10);
    }
}

#[test]
fn deflation_residual_leading_pc_is_original_second() {
    let x = common::correlated_panel(500, 4, 12);
    let set = pca_decompose(&x, 4).unwrap();
    let residual = project_residual(&x, &set.weights.row(0).to_vec()).unwrap();
    let again = pca_decompose(&residual, 1).unwrap();
    let cos = again.weights.row(0).dot(&set.weights.row(1)).abs();
    assert!(cos > 1.0 - 1e-10);
    assert!(project_residual(&x, &[0.0; 4]).is_err());
}

#[test]
fn deflation_agrees_with_direct_decomposition() {
    let x = common::correlated_panel(400, 6, 13);
    let a = pca_decompose(&x, 6).unwrap();
    let b = pca_deflate(&x, 6).unwrap();
    for i in 0..6 {
        assert!(common::rel_close(a.stats[i].volatility, b.stats[i].volatility, 1e-9));
        assert!(a.weights.row(i).dot(&b.weights.row(i)).abs() > 1.0 - 1e-9);
    }
}

#[test]
fn rank_deficient_panel_returns_fewer_components() {
    let base = common::correlated_panel(200, 2, 14);
    let mut v = Array2::zeros((200, 3));
    v.column_mut(0).assign(&base.column(0));
    v.column_mut(1).assign(&base.column(1));
    v.column_mut(2).assign(&(&base.column(0) + &base.column(1)));
    let set = pca_decompose(&ReturnsMatrix::new(v), 3).unwrap();
    assert_eq!(set.len(), 2);
    assert!(set.warnings.contains(&DecompositionWarning::RankDeficient {
        requested: 3,
        returned: 2
    }));
}

#[test]
fn zero_components_rejected() {
    let x = common::correlated_panel(50, 2, 15);
    assert!(matches!(pca_decompose(&x, 0), Err(Error::InvalidConfig(_))));
}

#[test]
fn sign_convention_and_determinism() {
    let x = common::correlated_panel(100, 4, 16);
    let a = pca_decompose(&x, 4).unwrap();
    assert_eq!(a, pca_decompose(&x, 4).unwrap());
    for row in a.weights.rows() {
        let big = row.iter().cloned().fold(0.0_f64, |m, v| if v.abs() > m.abs() { v } else { m });
        assert!(big > 0.0);
    }
}

#[test]
fn tied_eigenvalues_ordered_by_asset_index() {
    let x = ReturnsMatrix::new(array![[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
    let set = pca_decompose(&x, 2).unwrap();
    assert_eq!(set.weights, array![[1.0, 0.0], [0.0, 1.0]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants(n in 2usize..7, extra in 10usize..60, seed in any::<u64>()) {
        let x = common::correlated_panel(n + extra, n, seed);
        let set = pca_decompose(&x, n).unwrap();
        let gram = set.weights.dot(&set.weights.t());
        for ((i, j), g) in gram.indexed_iter() {
            let e = if i == j { 1.0 } else { 0.0 };
            prop_assert!((g - e).abs() < 1e-10);
        }
        let vars: Vec<f64> = set.stats.iter().map(|s| s.volatility.powi(2)).collect();
        prop_assert!(vars.windows(2).all(|w| w[0] >= w[1] * (1.0 - 1e-12)));
        let cov = estimate_moments(&x).unwrap().covariance;
        let trace: f64 = (0..n).map(|i| cov[[i, i]]).sum();
        prop_assert!(common::rel_close(vars.iter().sum(), trace, 1e-10));
    }
}

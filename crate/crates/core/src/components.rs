use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{series_stats, SeriesStats};
use crate::panel::ReturnsMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Pca,
    Ica,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Every weight row has unit Euclidean norm.
    UnitWeight,
    /// Every component series has the same variance.
    EqualVariance,
}

/// Non-fatal conditions raised during a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecompositionWarning {
    /// Fewer components than requested were available.
    RankDeficient { requested: usize, returned: usize },
    /// Component failed to converge under every restart; its last iterate is kept.
    NoConvergence { component: usize },
    /// All candidate kurtoses are close to zero; ICA is not identifiable.
    GaussianData { max_abs_kurtosis: f64 },
}

/// Ordered factor components extracted from a return panel.
///
/// Row `i` of `weights` maps asset returns to component `i`; column `i` of
/// `series` is that component's return series `weights[i]·S_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSet {
    pub weights: Array2<f64>,
    pub series: Array2<f64>,
    pub stats: Vec<SeriesStats>,
    pub kind: ComponentKind,
    pub normalization: Normalization,
    pub warnings: Vec<DecompositionWarning>,
}

impl ComponentSet {
    /// Builds a set from weight rows, recomputing series and stats from `returns`.
    pub fn from_weights(
        returns: &ReturnsMatrix,
        weights: Array2<f64>,
        kind: ComponentKind,
        normalization: Normalization,
    ) -> Result<Self> {
        if weights.ncols() != returns.n_assets() {
            return Err(Error::DimensionMismatch {
                expected: returns.n_assets(),
                actual: weights.ncols(),
            });
        }
        let series = returns.values().dot(&weights.t());
        let stats = stats_of_columns(series.view())?;
        Ok(Self {
            weights,
            series,
            stats,
            kind,
            normalization,
            warnings: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n_periods(&self) -> usize {
        self.series.nrows()
    }

    pub fn weight(&self, i: usize) -> ArrayView1<'_, f64> {
        self.weights.row(i)
    }

    pub fn component_series(&self, i: usize) -> ArrayView1<'_, f64> {
        self.series.column(i)
    }

    /// Component series as a panel, one column per component.
    pub fn series_matrix(&self) -> ReturnsMatrix {
        let prefix = match self.kind {
            ComponentKind::Pca => "PC",
            ComponentKind::Ica => "IC",
        };
        let tickers = (1..=self.len()).map(|i| format!("{prefix}{i}")).collect();
        ReturnsMatrix::with_labels(self.series.clone(), tickers, None)
            .expect("series columns match component count")
    }

    /// Maps component-space weights to asset-space weights.
    pub fn to_asset_weights(&self, component_weights: &[f64]) -> Result<Array1<f64>> {
        if component_weights.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: component_weights.len(),
            });
        }
        Ok(ArrayView1::from(component_weights).dot(&self.weights))
    }

    pub fn has_warning(&self, pred: impl Fn(&DecompositionWarning) -> bool) -> bool {
        self.warnings.iter().any(pred)
    }
}

pub(crate) fn stats_of_columns(series: ArrayView2<f64>) -> Result<Vec<SeriesStats>> {
    series
        .columns()
        .into_iter()
        .map(series_stats)
        .collect::<Result<Vec<_>>>()
}

//! The T×N return panel shared by every module.

use chrono::NaiveDate;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Per-period asset returns, one row per period and one column per asset.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsMatrix {
    values: Array2<f64>,
    tickers: Vec<String>,
    dates: Option<Vec<NaiveDate>>,
}

impl ReturnsMatrix {
    /// Wraps a raw T×N array; tickers default to `A0`, `A1`, ...
    pub fn new(values: Array2<f64>) -> Self {
        let tickers = (0..values.ncols()).map(|j| format!("A{j}")).collect();
        Self {
            values,
            tickers,
            dates: None,
        }
    }

    pub fn with_labels(
        values: Array2<f64>,
        tickers: Vec<String>,
        dates: Option<Vec<NaiveDate>>,
    ) -> Result<Self> {
        if tickers.len() != values.ncols() {
            return Err(Error::DimensionMismatch {
                expected: values.ncols(),
                actual: tickers.len(),
            });
        }
        if let Some(d) = &dates {
            if d.len() != values.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: values.nrows(),
                    actual: d.len(),
                });
            }
        }
        Ok(Self {
            values,
            tickers,
            dates,
        })
    }

    /// Builds a panel from column vectors of equal length.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.len();
        let t = columns.first().map_or(0, Vec::len);
        let mut values = Array2::zeros((t, n));
        for (j, col) in columns.iter().enumerate() {
            if col.len() != t {
                return Err(Error::LengthMismatch(t, col.len()));
            }
            values.column_mut(j).assign(&ArrayView1::from(col.as_slice()));
        }
        Ok(Self::new(values))
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn dates(&self) -> Option<&[NaiveDate]> {
        self.dates.as_deref()
    }

    pub fn n_periods(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_assets(&self) -> usize {
        self.values.ncols()
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, f64> {
        self.values.column(j)
    }

    /// Projects every period onto `w`, giving the series `w·S_t`.
    pub fn project(&self, w: &[f64]) -> Result<Array1<f64>> {
        if w.len() != self.n_assets() {
            return Err(Error::DimensionMismatch {
                expected: self.n_assets(),
                actual: w.len(),
            });
        }
        Ok(self.values.dot(&ArrayView1::from(w)))
    }

    /// Rejects panels with fewer than `min_rows` rows, no columns, or non-finite cells.
    pub(crate) fn validate(&self, min_rows: usize) -> Result<()> {
        let (t, n) = self.values.dim();
        if t < min_rows || n < 1 {
            return Err(Error::EmptyPanel { rows: t, cols: n });
        }
        for ((row, col), v) in self.values.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput { row, col });
            }
        }
        Ok(())
    }

    pub(crate) fn column_means(&self) -> Array1<f64> {
        self.values
            .mean_axis(Axis(0))
            .unwrap_or_else(|| Array1::zeros(self.n_assets()))
    }

    /// Column-demeaned copy of the values.
    pub(crate) fn centered(&self) -> Array2<f64> {
        &self.values - &self.column_means().insert_axis(Axis(0))
    }
}

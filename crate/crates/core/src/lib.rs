//! Factor decomposition and portfolio construction with PCA and ICA.
//!
//! * [`pca`] and [`ica`] extract variance-ordered and kurtosis-ordered components.
//! * [`portfolio`] builds Kelly, fat-tailed, hybrid and combined-objective portfolios.
//! * [`moments`] estimates mean, covariance and the excess-cokurtosis contraction.
//! * [`clt`] runs Monte Carlo experiments on how variance and kurtosis of
//!   equal-volatility baskets decay with basket size.
//! * [`data`] and [`metrics`] cover price ingestion and portfolio evaluation.
//! * [`cli`] backs the `fattail` binary.

pub mod cli;
pub mod clt;
pub mod components;
pub mod data;
pub mod error;
pub mod ica;
pub mod linalg;
pub mod metrics;
pub mod moments;
pub mod output;
pub mod panel;
pub mod pca;
pub mod portfolio;
pub mod sources;

pub use components::{ComponentKind, ComponentSet, DecompositionWarning, Normalization};
pub use error::{Error, Result};
pub use panel::ReturnsMatrix;

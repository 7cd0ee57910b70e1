//! Quantile estimation with the Harrell-Davis estimator, its trimmed
//! modification and the Hyndman-Fan Type 7 baseline.
//!
//! The trimmed estimator keeps only the order statistics that fall inside the
//! highest-density interval of the weight-generating beta distribution, so a
//! handful of extreme outliers cannot move the estimate. With the default
//! width `1/sqrt(n)` only `O(sqrt n)` order statistics are touched.
//!
//! ```
//! use thd_core::{hd_quantile, thd_quantile, QuantileRequest, Sample, TrimWidth};
//!
//! let x = Sample::new(vec![
//!     -0.565, -0.106, -0.095, 0.363, 0.404, 0.633, 1.371, 1.512, 2.018, 100_000.0,
//! ])
//! .unwrap();
//! let hd = hd_quantile(&x, 0.5).unwrap();
//! let thd = thd_quantile(&x, QuantileRequest::new(0.5, TrimWidth::Auto).unwrap()).unwrap();
//! assert!(hd > 50.0);
//! assert!((thd - 0.6268).abs() < 1e-3);
//! ```
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod distributions;
mod error;
pub mod estimators;
pub mod hdi;
pub mod special;

pub use distributions::{DistributionSpec, ParseDistributionError, RngStream, StreamRng};
pub use error::{Error, Result};
pub use estimators::{
    hd_quantile, hd_weights, hf7_quantile, thd_quantile, thd_weights, HarrellDavis, Hf7,
    QuantileEstimator, QuantilePlan, QuantileRequest, Sample, TrimWidth, TrimmedHarrellDavis,
    WeightVector,
};
pub use hdi::{beta_hdi, beta_mode, HdiCase, HdiInterval, Mode};
pub use special::{beta_pdf, ln_gamma, regularized_incomplete_beta, BetaParams};

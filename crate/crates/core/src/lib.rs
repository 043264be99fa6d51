//! Time-series econometrics for short annual macro panels of a single country.
//!
//! The crate covers the usual cointegration workflow: unit-root testing
//! (ADF, Phillips–Perron), VAR lag selection, Johansen rank tests, VECM
//! estimation with normalized long-run vectors, short-run block-exogeneity
//! Wald tests, a principal-component index of several inflow series, OLS,
//! and residual diagnostics. The [`pipeline`] module ties these together into
//! a reproducible report driven by a config file.

pub mod cv_tables;
pub mod diagnostics;
pub mod error;
pub mod fcdi;
pub mod johansen;
pub mod mc;
pub mod pipeline;
pub mod series;
pub mod stats;
pub mod unit_root;
pub mod var;

pub use error::{Error, Result};
pub use series::{Dataset, TimeSeries};

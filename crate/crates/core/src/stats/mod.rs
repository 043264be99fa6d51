//! Least squares, long-run variance, eigenproblems and reference
//! distributions shared by the estimators.

mod dist;
mod eigen;
mod hac;
mod ols;

pub use dist::{chi_square_tail, normal_two_sided, t_two_sided, tail_probability, Distribution};
pub use eigen::{generalized_eigen, symmetric_eigen, EigenPair};
pub(crate) use hac::bandwidth_for_len;
pub use hac::{auto_bandwidth, newey_west_lrv};
pub use ols::{ols_fit, regress, LeastSquares, OlsResult, Regression, RANK_TOLERANCE};

use nalgebra::{DMatrix, DVector, Dyn, QR};

use super::dist::{self, Distribution};
use crate::error::{Error, Result};

/// Smallest allowed ratio of `|R_ii|` to `max |R_jj|` in the factorization of
/// the column-equilibrated design.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Householder QR of a column-equilibrated design matrix.
///
/// Columns are scaled to unit Euclidean norm before factorizing so that the
/// rank check does not depend on the units of the regressors.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    qr: QR<f64, Dyn, Dyn>,
    r: DMatrix<f64>,
    scale: DVector<f64>,
    nrows: usize,
}

impl LeastSquares {
    pub fn new(x: &DMatrix<f64>) -> Result<Self> {
        let (n, k) = x.shape();
        if k == 0 {
            return Err(Error::InvalidParameters(
                "design matrix has no columns".into(),
            ));
        }
        if n < k {
            return Err(Error::InsufficientObservations { needed: k, got: n });
        }
        let scale = DVector::from_iterator(k, x.column_iter().map(|c| c.norm()));
        if scale.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::RankDeficient);
        }
        let mut xs = x.clone();
        for (j, s) in scale.iter().enumerate() {
            xs.column_mut(j).unscale_mut(*s);
        }
        let qr = xs.qr();
        let r = qr.r();
        let diag: Vec<f64> = (0..k).map(|i| r[(i, i)].abs()).collect();
        let max = diag.iter().cloned().fold(0.0, f64::max);
        let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min > RANK_TOLERANCE * max) {
            return Err(Error::RankDeficient);
        }
        Ok(Self {
            qr,
            r,
            scale,
            nrows: n,
        })
    }

    pub fn ncols(&self) -> usize {
        self.scale.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Coefficients (`k × m`) for each column of `y`.
    pub fn solve(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(y.nrows(), self.nrows, "response length must match design");
        let k = self.ncols();
        let mut qty = y.clone();
        self.qr.q_tr_mul(&mut qty);
        let top = qty.rows(0, k).into_owned();
        let mut b = self
            .r
            .solve_upper_triangular(&top)
            .expect("triangular factor checked non-singular");
        for (i, s) in self.scale.iter().enumerate() {
            b.row_mut(i).unscale_mut(*s);
        }
        b
    }

    /// `(XᵀX)⁻¹` from the triangular factor, without forming `XᵀX`.
    pub fn xtx_inverse(&self) -> DMatrix<f64> {
        let k = self.ncols();
        let r_inv = self
            .r
            .solve_upper_triangular(&DMatrix::identity(k, k))
            .expect("triangular factor checked non-singular");
        let mut m = &r_inv * r_inv.transpose();
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] /= self.scale[i] * self.scale[j];
            }
        }
        m
    }
}

/// Multivariate least-squares fit: coefficients (`k × m`) and residuals (`n × m`).
#[derive(Debug, Clone)]
pub struct Regression {
    pub coefficients: DMatrix<f64>,
    pub residuals: DMatrix<f64>,
}

/// Regresses every column of `y` on `x`. A design with zero columns leaves `y`
/// untouched.
pub fn regress(y: &DMatrix<f64>, x: &DMatrix<f64>) -> Result<Regression> {
    if x.ncols() == 0 {
        return Ok(Regression {
            coefficients: DMatrix::zeros(0, y.ncols()),
            residuals: y.clone(),
        });
    }
    let ls = LeastSquares::new(x)?;
    let coefficients = ls.solve(y);
    let residuals = y - x * &coefficients;
    Ok(Regression {
        coefficients,
        residuals,
    })
}

#[derive(Debug, Clone)]
pub struct OlsResult {
    /// Intercept first when fitted with one.
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    /// Two-sided Student-t p-values.
    pub p_values: Vec<f64>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    /// Joint test that all slopes are zero; NaN when there are no slopes.
    pub f_stat: f64,
    pub f_p_value: f64,
    pub residuals: Vec<f64>,
    pub dof: usize,
    pub rss: f64,
    /// `s² = RSS / dof`.
    pub sigma2: f64,
    /// Classical covariance `s² (XᵀX)⁻¹`.
    pub covariance: DMatrix<f64>,
    pub intercept: bool,
}

impl OlsResult {
    pub fn nobs(&self) -> usize {
        self.residuals.len()
    }
}

/// Ordinary least squares with classical homoskedastic inference.
///
/// When `intercept` is set a column of ones is prepended to `x`.
pub fn ols_fit(y: &[f64], x: &DMatrix<f64>, intercept: bool) -> Result<OlsResult> {
    let n = y.len();
    if x.nrows() != n {
        return Err(Error::InvalidParameters(format!(
            "{} responses for {} design rows",
            n,
            x.nrows()
        )));
    }
    let design = if intercept {
        x.clone().insert_column(0, 1.0)
    } else {
        x.clone()
    };
    let k = design.ncols();
    if n <= k {
        return Err(Error::InsufficientObservations {
            needed: k + 1,
            got: n,
        });
    }
    let ls = LeastSquares::new(&design)?;
    let yv = DMatrix::from_column_slice(n, 1, y);
    let beta = ls.solve(&yv);
    let resid = &yv - &design * &beta;
    let rss = resid.norm_squared();
    let dof = n - k;
    let sigma2 = rss / dof as f64;
    let covariance = ls.xtx_inverse() * sigma2;

    let coefficients: Vec<f64> = beta.column(0).iter().copied().collect();
    let standard_errors: Vec<f64> = (0..k).map(|i| covariance[(i, i)].max(0.0).sqrt()).collect();
    let t_stats: Vec<f64> = coefficients
        .iter()
        .zip(&standard_errors)
        .map(|(b, se)| b / se)
        .collect();
    let p_values = t_stats
        .iter()
        .map(|t| dist::t_two_sided(*t, dof as f64))
        .collect();

    let tss = if intercept {
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
    } else {
        y.iter().map(|v| v * v).sum::<f64>()
    };
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    let base = if intercept { n - 1 } else { n };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * base as f64 / dof as f64;
    let slopes = if intercept { k - 1 } else { k };
    let (f_stat, f_p_value) = if slopes == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let f = ((tss - rss) / slopes as f64) / sigma2;
        let f = if f.is_nan() { f64::INFINITY } else { f };
        let p = dist::tail_probability(
            Distribution::F {
                dof1: slopes as f64,
                dof2: dof as f64,
            },
            f,
        )?;
        (f, p)
    };

    Ok(OlsResult {
        coefficients,
        standard_errors,
        t_stats,
        p_values,
        r_squared,
        adj_r_squared,
        f_stat,
        f_p_value,
        residuals: resid.column(0).iter().copied().collect(),
        dof,
        rss,
        sigma2,
        covariance,
        intercept,
    })
}

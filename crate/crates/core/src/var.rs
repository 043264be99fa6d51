//! Unrestricted VAR estimation and lag-order selection.
//!
//! Information criteria use the per-observation scaling
//!
//! ```text
//! LL   = −(T/2) (d ln 2π + ln|Σ| + d)
//! AIC  = −2 LL/T + 2 n/T
//! HQIC = −2 LL/T + 2 ln(ln T) n/T
//! SBIC = −2 LL/T + ln T · n/T
//! FPE  = |Σ| ((T + m)/(T − m))^d
//! ```
//!
//! where `Σ` is the residual covariance with denominator `T`, `m = dp + 1`
//! is the number of parameters per equation and `n = d·m`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Dataset;
use crate::stats::{self, regress};

#[derive(Debug, Clone)]
pub struct VarModel {
    pub variables: Vec<String>,
    pub lag: usize,
    /// `A_1..A_p`, each `d × d`; row `i` holds equation `i`.
    pub coefficients: Vec<DMatrix<f64>>,
    pub intercept: DVector<f64>,
    pub residuals: DMatrix<f64>,
    /// Residual covariance with denominator `T`.
    pub sigma_u: DMatrix<f64>,
    pub log_likelihood: f64,
    pub first_year: i32,
}

impl VarModel {
    pub fn n_effective(&self) -> usize {
        self.residuals.nrows()
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }
}

/// Gaussian log-likelihood of a `d`-variate model with ML residual
/// covariance `sigma` over `t` observations.
pub fn gaussian_log_likelihood(sigma: &DMatrix<f64>, t: usize) -> Result<f64> {
    let chol = sigma.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let ln_det = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let d = sigma.nrows() as f64;
    Ok(-(t as f64) / 2.0 * (d * (2.0 * PI).ln() + ln_det + d))
}

/// VAR(p) on its own maximal sample.
pub fn var_fit(data: &Dataset, p: usize) -> Result<VarModel> {
    var_fit_from(data, p, p)
}

/// VAR(p) estimated from observation `first` onward (`first ≥ p`), so models
/// of different orders can share a common sample.
pub fn var_fit_from(data: &Dataset, p: usize, first: usize) -> Result<VarModel> {
    if first < p {
        return Err(Error::InvalidParameters(format!(
            "estimation start {first} precedes lag order {p}"
        )));
    }
    let y = data.matrix();
    let (n, d) = y.shape();
    let needed = first + d * p + d + 5;
    if n < needed {
        return Err(Error::InsufficientObservations { needed, got: n });
    }
    let t = n - first;
    let mut x = DMatrix::from_element(t, 1 + d * p, 1.0);
    for (r, s) in (first..n).enumerate() {
        for l in 1..=p {
            for j in 0..d {
                x[(r, 1 + (l - 1) * d + j)] = y[(s - l, j)];
            }
        }
    }
    let yt = y.rows(first, t).into_owned();
    let fit = regress(&yt, &x)?;
    let b = &fit.coefficients;
    let intercept = b.row(0).transpose();
    let coefficients = (1..=p)
        .map(|l| b.rows(1 + (l - 1) * d, d).transpose())
        .collect();
    let sigma_u = fit.residuals.transpose() * &fit.residuals / t as f64;
    let log_likelihood = gaussian_log_likelihood(&sigma_u, t)?;
    Ok(VarModel {
        variables: data.names().iter().map(|s| s.to_string()).collect(),
        lag: p,
        coefficients,
        intercept,
        residuals: fit.residuals,
        sigma_u,
        log_likelihood,
        first_year: data.first_year() + first as i32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Criteria {
    pub fpe: f64,
    pub aic: f64,
    pub hqic: f64,
    pub sbic: f64,
}

/// Criteria of a VAR(`lag`) in `dim` variables with an intercept, from its
/// log-likelihood over `nobs` observations.
pub fn criteria_from_log_likelihood(ll: f64, nobs: usize, dim: usize, lag: usize) -> Criteria {
    let t = nobs as f64;
    let d = dim as f64;
    let per_eq = (dim * lag + 1) as f64;
    let n = d * per_eq;
    let base = -2.0 * ll / t;
    let ln_det = base - d * ((2.0 * PI).ln() + 1.0);
    Criteria {
        fpe: ln_det.exp() * ((t + per_eq) / (t - per_eq)).powf(d),
        aic: base + 2.0 * n / t,
        hqic: base + 2.0 * t.ln().ln() * n / t,
        sbic: base + t.ln() * n / t,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagRow {
    pub lag: usize,
    pub log_likelihood: f64,
    /// `2 (LL_j − LL_{j−1})`; absent at lag 0.
    pub lr_stat: Option<f64>,
    pub lr_df: usize,
    pub lr_p_value: Option<f64>,
    pub criteria: Criteria,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedLags {
    pub lr: usize,
    pub fpe: usize,
    pub aic: usize,
    pub hqic: usize,
    pub sbic: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagSelectionTable {
    pub variables: Vec<String>,
    pub n_effective: usize,
    pub rows: Vec<LagRow>,
    pub selected: SelectedLags,
    /// The AIC choice.
    pub chosen_lag: usize,
}

fn argmin(rows: &[LagRow], f: impl Fn(&Criteria) -> f64) -> usize {
    // strict comparison keeps the smaller lag on ties
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if f(&r.criteria) < f(&rows[best].criteria) {
            best = i;
        }
    }
    rows[best].lag
}

/// Fits VAR(0)..VAR(`max_lag`) on the common sample that drops the first
/// `max_lag` observations and tabulates the selection criteria.
///
/// The LR choice is the largest lag whose test against the next smaller lag
/// rejects at 5%, testing downward from `max_lag`; 0 if none does.
pub fn select_lag(data: &Dataset, max_lag: usize) -> Result<LagSelectionTable> {
    let d = data.dim();
    let mut rows: Vec<LagRow> = Vec::with_capacity(max_lag + 1);
    let mut nobs = 0;
    for p in 0..=max_lag {
        let m = var_fit_from(data, p, max_lag)?;
        nobs = m.n_effective();
        let ll = m.log_likelihood;
        let (lr_stat, lr_p_value) = match rows.last() {
            Some(prev) => {
                let lr = 2.0 * (ll - prev.log_likelihood);
                (Some(lr), Some(stats::chi_square_tail(lr, (d * d) as f64)))
            }
            None => (None, None),
        };
        rows.push(LagRow {
            lag: p,
            log_likelihood: ll,
            lr_stat,
            lr_df: if p == 0 { 0 } else { d * d },
            lr_p_value,
            criteria: criteria_from_log_likelihood(ll, nobs, d, p),
        });
    }
    let lr = rows
        .iter()
        .rev()
        .find(|r| r.lr_p_value.is_some_and(|p| p < 0.05))
        .map_or(0, |r| r.lag);
    let selected = SelectedLags {
        lr,
        fpe: argmin(&rows, |c| c.fpe),
        aic: argmin(&rows, |c| c.aic),
        hqic: argmin(&rows, |c| c.hqic),
        sbic: argmin(&rows, |c| c.sbic),
    };
    Ok(LagSelectionTable {
        variables: data.names().iter().map(|s| s.to_string()).collect(),
        n_effective: nobs,
        rows,
        chosen_lag: selected.aic,
        selected,
    })
}
